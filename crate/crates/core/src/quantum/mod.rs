//! Statevector simulation plus the per-sample encode / decode circuit.

mod encoding;
mod state;

pub use encoding::{
    decode_state_to_features, encode_sample, normalize_features, EncodingAngles, EncodingCircuit, NormBounds,
    Topology,
};
pub use state::{StateVector, DEFAULT_QUBIT_CAP};
