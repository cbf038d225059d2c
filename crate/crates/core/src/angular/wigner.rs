use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exact::{factorial, float_factorial, SqrtRational};
use super::halfint::{triangle, HalfInt};

fn half(twice: i32) -> i64 {
    debug_assert!(twice % 2 == 0);
    i64::from(twice / 2)
}

fn fact_ratio(num: &[i64], den: &[i64]) -> BigRational {
    let mut n = BigInt::one();
    for &k in num {
        n *= factorial(k as u32);
    }
    let mut d = BigInt::one();
    for &k in den {
        d *= factorial(k as u32);
    }
    BigRational::new(n, d)
}

fn float_fact_ratio(num: &[i64], den: &[i64]) -> f64 {
    let mut v = 1.0;
    for &k in num {
        v *= float_factorial(k);
    }
    for &k in den {
        v /= float_factorial(k);
    }
    v
}

/// Triangle coefficient arguments `(a+b-c, a-b+c, -a+b+c; a+b+c+1)`.
fn delta_args(a: HalfInt, b: HalfInt, c: HalfInt) -> ([i64; 3], i64) {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    (
        [half(a + b - c), half(a - b + c), half(-a + b + c)],
        half(a + b + c) + 1,
    )
}

struct ThreeJ {
    phase: i64,
    radicand_num: Vec<i64>,
    radicand_den: Vec<i64>,
    kmin: i64,
    kmax: i64,
    // Denominator factorial arguments are `k + offset[i]` or `offset[i] - k`.
    up: [i64; 3],
    down: [i64; 3],
}

fn three_j_setup(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Option<ThreeJ> {
    if !(j1.admits_projection(m1) && j2.admits_projection(m2) && j3.admits_projection(m3)) {
        return None;
    }
    if (m1 + m2 + m3).twice() != 0 || !triangle(j1, j2, j3) {
        return None;
    }
    let (t1, t2, t3) = (j1.twice(), j2.twice(), j3.twice());
    let (u1, u2, u3) = (m1.twice(), m2.twice(), m3.twice());
    let (dn, dd) = delta_args(j1, j2, j3);
    let mut radicand_num = dn.to_vec();
    radicand_num.extend([
        half(t1 + u1),
        half(t1 - u1),
        half(t2 + u2),
        half(t2 - u2),
        half(t3 + u3),
        half(t3 - u3),
    ]);
    // k!, (j3-j2+k+m1)!, (j3-j1+k-m2)!
    let up = [0, half(t3 - t2 + u1), half(t3 - t1 - u2)];
    // (j1+j2-j3-k)!, (j1-m1-k)!, (j2+m2-k)!
    let down = [half(t1 + t2 - t3), half(t1 - u1), half(t2 + u2)];
    let kmin = up.iter().map(|&o| -o).max().unwrap().max(0);
    let kmax = *down.iter().min().unwrap();
    Some(ThreeJ {
        phase: half(t1 - t2 - u3),
        radicand_num,
        radicand_den: vec![dd],
        kmin,
        kmax,
        up,
        down,
    })
}

fn phase_sign(n: i64) -> i8 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Wigner 3j symbol in exact `s * sqrt(p/q)` form (Racah single sum).
///
/// Selection-rule violations give exact zero.
pub fn wigner3j_exact(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> SqrtRational {
    let Some(s) = three_j_setup(j1, j2, j3, m1, m2, m3) else {
        return SqrtRational::zero();
    };
    let mut sum = BigRational::zero();
    for k in s.kmin..=s.kmax {
        let den: Vec<i64> = s
            .up
            .iter()
            .map(|o| k + o)
            .chain(s.down.iter().map(|o| o - k))
            .collect();
        let term = fact_ratio(&[], &den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let radicand = fact_ratio(&s.radicand_num, &s.radicand_den);
    SqrtRational::scaled(phase_sign(s.phase), &sum, &radicand)
}

/// Floating-point 3j symbol from the same Racah sum in `f64`.
pub fn wigner3j(j1: HalfInt, j2: HalfInt, j3: HalfInt, m1: HalfInt, m2: HalfInt, m3: HalfInt) -> f64 {
    let Some(s) = three_j_setup(j1, j2, j3, m1, m2, m3) else {
        return 0.0;
    };
    let largest = s.radicand_den[0];
    if largest > 170 {
        return wigner3j_exact(j1, j2, j3, m1, m2, m3).to_f64();
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in s.kmin..=s.kmax {
        let den: Vec<i64> = s
            .up
            .iter()
            .map(|o| k + o)
            .chain(s.down.iter().map(|o| o - k))
            .collect();
        let term = if k % 2 == 0 { 1.0 } else { -1.0 } / float_fact_ratio(&den, &[]);
        // Neumaier summation
        let t = sum + term;
        if f64::abs(sum) >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    let radicand = float_fact_ratio(&s.radicand_num, &s.radicand_den);
    f64::from(phase_sign(s.phase)) * (sum + comp) * radicand.sqrt()
}

struct SixJ {
    deltas: [([i64; 3], i64); 4],
    a: [i64; 4],
    b: [i64; 3],
}

fn six_j_setup(j: [HalfInt; 6]) -> Option<SixJ> {
    let [j1, j2, j3, j4, j5, j6] = j;
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if !triads.iter().all(|&(a, b, c)| triangle(a, b, c)) {
        return None;
    }
    let t = |h: HalfInt| h.twice();
    Some(SixJ {
        deltas: triads.map(|(a, b, c)| delta_args(a, b, c)),
        a: triads.map(|(a, b, c)| half(t(a) + t(b) + t(c))),
        b: [
            half(t(j1) + t(j2) + t(j4) + t(j5)),
            half(t(j2) + t(j3) + t(j5) + t(j6)),
            half(t(j3) + t(j1) + t(j6) + t(j4)),
        ],
    })
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}` in exact form (Racah formula).
pub fn wigner6j_exact(j1: HalfInt, j2: HalfInt, j3: HalfInt, j4: HalfInt, j5: HalfInt, j6: HalfInt) -> SqrtRational {
    let Some(s) = six_j_setup([j1, j2, j3, j4, j5, j6]) else {
        return SqrtRational::zero();
    };
    let tmin = *s.a.iter().max().unwrap();
    let tmax = *s.b.iter().min().unwrap();
    let mut sum = BigRational::zero();
    for t in tmin..=tmax {
        let den: Vec<i64> = s
            .a
            .iter()
            .map(|a| t - a)
            .chain(s.b.iter().map(|b| b - t))
            .collect();
        let term = fact_ratio(&[t + 1], &den);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let mut radicand = BigRational::one();
    for (num, den) in &s.deltas {
        radicand *= fact_ratio(num, &[*den]);
    }
    SqrtRational::scaled(1, &sum, &radicand)
}

/// Floating-point 6j symbol.
pub fn wigner6j(j1: HalfInt, j2: HalfInt, j3: HalfInt, j4: HalfInt, j5: HalfInt, j6: HalfInt) -> f64 {
    let Some(s) = six_j_setup([j1, j2, j3, j4, j5, j6]) else {
        return 0.0;
    };
    let tmin = *s.a.iter().max().unwrap();
    let tmax = *s.b.iter().min().unwrap();
    if tmax + 1 > 170 {
        return wigner6j_exact(j1, j2, j3, j4, j5, j6).to_f64();
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    for t in tmin..=tmax {
        let den: Vec<i64> = s
            .a
            .iter()
            .map(|a| t - a)
            .chain(s.b.iter().map(|b| b - t))
            .collect();
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * float_fact_ratio(&[t + 1], &den);
        let next = sum + term;
        if f64::abs(sum) >= term.abs() {
            comp += (sum - next) + term;
        } else {
            comp += (term - next) + sum;
        }
        sum = next;
    }
    let mut radicand = 1.0;
    for (num, den) in &s.deltas {
        radicand *= float_fact_ratio(num, &[*den]);
    }
    (sum + comp) * radicand.sqrt()
}
