use crate::{LstmError, Model, Result, TrainConfig};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"MDHPLSTM";
const VERSION: u32 = 1;

/// Checkpoint header: the configs and seed that produced the weights, plus
/// the parameter count as a consistency check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointManifest {
    pub version: u32,
    pub train: TrainConfig,
    pub seed: u64,
    pub param_count: usize,
}

/// Writes a versioned binary checkpoint: magic, version, JSON manifest,
/// then the flattened weights as little-endian f64.
pub fn save_checkpoint(path: &Path, model: &Model, train: &TrainConfig) -> Result<()> {
    let manifest = CheckpointManifest {
        version: VERSION,
        train: train.clone(),
        seed: train.seed(),
        param_count: model.param_count(),
    };
    let manifest_json =
        serde_json::to_vec(&manifest).map_err(|e| LstmError::Checkpoint(e.to_string()))?;
    let flat = model.flatten();

    let mut f = fs::File::create(path)?;
    f.write_all(MAGIC)?;
    f.write_all(&VERSION.to_le_bytes())?;
    f.write_all(&(manifest_json.len() as u64).to_le_bytes())?;
    f.write_all(&manifest_json)?;
    f.write_all(&(flat.len() as u64).to_le_bytes())?;
    for v in flat {
        f.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a checkpoint back into a model plus its manifest.
pub fn load_checkpoint(path: &Path) -> Result<(Model, CheckpointManifest)> {
    let mut f = fs::File::open(path)?;
    let mut magic = [0u8; 8];
    f.read_exact(&mut magic)
        .map_err(|_| LstmError::Checkpoint("file too short".into()))?;
    if &magic != MAGIC {
        return Err(LstmError::Checkpoint("bad magic".into()));
    }
    let mut u32buf = [0u8; 4];
    f.read_exact(&mut u32buf)?;
    let version = u32::from_le_bytes(u32buf);
    if version != VERSION {
        return Err(LstmError::Checkpoint(format!(
            "unsupported version {version}"
        )));
    }
    let mut u64buf = [0u8; 8];
    f.read_exact(&mut u64buf)?;
    let manifest_len = u64::from_le_bytes(u64buf) as usize;
    let mut manifest_bytes = vec![0u8; manifest_len];
    f.read_exact(&mut manifest_bytes)?;
    let manifest: CheckpointManifest = serde_json::from_slice(&manifest_bytes)
        .map_err(|e| LstmError::Checkpoint(format!("manifest: {e}")))?;

    f.read_exact(&mut u64buf)?;
    let n = u64::from_le_bytes(u64buf) as usize;
    if n != manifest.param_count {
        return Err(LstmError::Checkpoint(format!(
            "parameter count {n} does not match manifest {}",
            manifest.param_count
        )));
    }
    let mut flat = vec![0.0f64; n];
    let mut f64buf = [0u8; 8];
    for v in flat.iter_mut() {
        f.read_exact(&mut f64buf)
            .map_err(|_| LstmError::Checkpoint("truncated weights".into()))?;
        *v = f64::from_le_bytes(f64buf);
    }
    let mut model = Model::zeros(&manifest.train.model)?;
    model.set_from_flat(&flat)?;
    Ok((model, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ModelConfig;

    #[test]
    fn round_trip_preserves_weights() {
        let cfg = TrainConfig {
            model: ModelConfig {
                mdhp_dims: 2,
                hidden: 6,
                smb_dim: 5,
                head_hidden: 4,
                ..ModelConfig::default()
            },
            ..TrainConfig::default()
        };
        let model = Model::init(&cfg.model, 123).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.ckpt");
        save_checkpoint(&path, &model, &cfg).unwrap();
        let (loaded, manifest) = load_checkpoint(&path).unwrap();
        assert_eq!(loaded, model);
        assert_eq!(manifest.seed, 1024);
        assert_eq!(manifest.param_count, model.param_count());
    }

    #[test]
    fn corrupt_magic_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bogus.ckpt");
        std::fs::write(&path, b"NOTMDHPXXXXX").unwrap();
        assert!(matches!(
            load_checkpoint(&path),
            Err(LstmError::Checkpoint(_))
        ));
    }
}
