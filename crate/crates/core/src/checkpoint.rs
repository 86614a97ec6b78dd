//! Binary checkpoint format for model weights, plus content hashing.
//!
//! Layout: magic `TWBR`, format version as `u16` little-endian, then
//! class count, patch radius, and channel count as `u32` little-endian,
//! then the weight matrix as little-endian `f64` values in row-major
//! order. Encoding and decoding round-trip bit-exactly.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use sha2::{Digest, Sha256};

use crate::corridor::Dataset;
use crate::segnet::{ModelParams, ModelSpec};
use crate::{CoreError, Result};

pub const MAGIC: [u8; 4] = *b"TWBR";
pub const FORMAT_VERSION: u16 = 1;

/// Serialize model weights to the checkpoint byte layout.
pub fn encode(model: &ModelParams) -> Vec<u8> {
    let spec = model.spec();
    let mut out = Vec::with_capacity(4 + 2 + 12 + model.weights().len() * 8);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(spec.class_count as u32).to_le_bytes());
    out.extend_from_slice(&(spec.patch_radius as u32).to_le_bytes());
    out.extend_from_slice(&(spec.channels as u32).to_le_bytes());
    for w in model.weights() {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out
}

/// Decode a checkpoint produced by [`encode`].
pub fn decode(bytes: &[u8]) -> Result<ModelParams> {
    if bytes.len() < 18 {
        return Err(CoreError::Malformed("checkpoint shorter than header".into()));
    }
    if bytes[0..4] != MAGIC {
        return Err(CoreError::Malformed("bad checkpoint magic".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != FORMAT_VERSION {
        return Err(CoreError::Malformed(format!(
            "unsupported checkpoint version {version}"
        )));
    }
    let read_u32 = |at: usize| u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]]);
    let class_count = read_u32(6) as usize;
    let patch_radius = read_u32(10) as usize;
    let channels = read_u32(14) as usize;
    let spec = ModelSpec::new(class_count, patch_radius, channels);
    let body = &bytes[18..];
    if body.len() % 8 != 0 {
        return Err(CoreError::Malformed("weight payload is not a whole number of f64s".into()));
    }
    let weights: Vec<f64> = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes([c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]]))
        .collect();
    ModelParams::from_parts(spec, weights)
}

/// Lowercase hex SHA-256 of arbitrary bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Content hash of a model: SHA-256 over its checkpoint encoding.
pub fn model_sha256(model: &ModelParams) -> String {
    sha256_hex(&encode(model))
}

/// Content hash of a dataset: stage, ids, image buffers, and labels.
pub fn dataset_sha256(dataset: &Dataset) -> String {
    let mut hasher = Sha256::new();
    hasher.update([dataset.stage() as u8]);
    for sample in dataset.samples() {
        hasher.update(sample.id.as_bytes());
        hasher.update([0u8]);
        let img = &sample.image;
        hasher.update((img.height() as u32).to_le_bytes());
        hasher.update((img.width() as u32).to_le_bytes());
        hasher.update((img.channels() as u32).to_le_bytes());
        for v in img.data() {
            hasher.update(v.to_le_bytes());
        }
        match &sample.labels {
            Some(labels) => {
                hasher.update([1u8]);
                hasher.update(labels.labels());
            }
            None => hasher.update([0u8]),
        }
    }
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let model = ModelParams::init(ModelSpec::new(5, 2, 3), 7).unwrap();
        let bytes = encode(&model);
        let back = decode(&bytes).unwrap();
        assert_eq!(encode(&back), bytes);
        assert_eq!(back.weights(), model.weights());
    }

    #[test]
    fn decode_rejects_bad_magic_and_truncation() {
        let model = ModelParams::init(ModelSpec::new(2, 0, 1), 0).unwrap();
        let mut bytes = encode(&model);
        bytes[0] = b'X';
        assert!(matches!(decode(&bytes), Err(CoreError::Malformed(_))));
        let bytes = encode(&model);
        assert!(matches!(decode(&bytes[..10]), Err(CoreError::Malformed(_))));
        let mut bytes = encode(&model);
        bytes.truncate(bytes.len() - 3);
        assert!(matches!(decode(&bytes), Err(CoreError::Malformed(_))));
    }

    #[test]
    fn decode_rejects_inconsistent_shape() {
        let model = ModelParams::init(ModelSpec::new(2, 0, 1), 0).unwrap();
        let mut bytes = encode(&model);
        bytes.extend_from_slice(&1.0f64.to_le_bytes());
        assert!(matches!(decode(&bytes), Err(CoreError::ShapeMismatch(_))));
    }
}
