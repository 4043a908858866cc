//! Monte Carlo simulation of Y = H·X + W with ML sphere decoding.

pub mod channel;
pub mod constellation;
pub mod run;
pub mod sphere;

pub use channel::{real_lattice_model, transmit, ChannelRealization};
pub use constellation::{make_hex, make_qam, Constellation, Family};
pub use run::{run_cer, SimConfig, SimPoint, SimResult};
pub use sphere::{ml_exhaustive, sphere_decode, Alphabet, SphereDecoder};
