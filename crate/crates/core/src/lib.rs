pub mod angular;
pub mod frames;
pub mod vsh;
pub mod polarization;
pub mod tensor;
pub mod coupling;
pub mod beams;
pub mod selfcheck;
pub mod scenario;
