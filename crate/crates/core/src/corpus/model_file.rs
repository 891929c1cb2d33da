use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::gam::AdditiveModel;
use crate::gaminet::GaminetNetworks;
use crate::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Ebm,
    Gaminet,
    Logistic,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Ebm => "ebm",
            ModelKind::Gaminet => "gaminet",
            ModelKind::Logistic => "logistic",
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ebm" => Ok(ModelKind::Ebm),
            "gaminet" => Ok(ModelKind::Gaminet),
            "logistic" | "lr" => Ok(ModelKind::Logistic),
            other => Err(Error::Validation(format!(
                "unknown model kind `{other}` (expected ebm, gaminet or logistic)"
            ))),
        }
    }
}

/// Everything covered by the checksum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub model_kind: ModelKind,
    pub feature_names: Vec<String>,
    /// Training configuration as it was given to the trainer.
    pub config: serde_json::Value,
    pub model: AdditiveModel,
    /// Native subnetworks for GAMI-Net models; prediction uses `model`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub networks: Option<GaminetNetworks>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    format_version: u64,
    checksum: String,
    body: ModelFile,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u64,
}

fn checksum(body: &ModelFile) -> Result<String> {
    let bytes = serde_json::to_vec(body)?;
    let digest = Sha256::digest(&bytes);
    Ok(hex::encode(digest))
}

impl ModelFile {
    pub fn new(
        model_kind: ModelKind,
        config: serde_json::Value,
        model: AdditiveModel,
        networks: Option<GaminetNetworks>,
    ) -> Self {
        Self {
            model_kind,
            feature_names: model.feature_names.clone(),
            config,
            model,
            networks,
        }
    }
}

/// Serialized file contents; identical models give identical bytes.
pub fn to_model_bytes(file: &ModelFile) -> Result<Vec<u8>> {
    let envelope = Envelope {
        format_version: FORMAT_VERSION,
        checksum: checksum(file)?,
        body: file.clone(),
    };
    let mut bytes = serde_json::to_vec_pretty(&envelope)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn save_model(file: &ModelFile, path: &Path) -> Result<()> {
    fs::write(path, to_model_bytes(file)?)?;
    Ok(())
}

pub fn from_model_bytes(bytes: &[u8]) -> Result<ModelFile> {
    let probe: VersionProbe = serde_json::from_slice(bytes)
        .map_err(|e| Error::Integrity(format!("not a model file: {e}")))?;
    if probe.format_version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion {
            found: probe.format_version,
            supported: FORMAT_VERSION,
        });
    }
    let envelope: Envelope = serde_json::from_slice(bytes)
        .map_err(|e| Error::Integrity(format!("malformed model payload: {e}")))?;
    let actual = checksum(&envelope.body)?;
    if actual != envelope.checksum {
        return Err(Error::Integrity(format!(
            "checksum mismatch: file says {}, payload hashes to {actual}",
            envelope.checksum
        )));
    }
    let body = envelope.body;
    if body.feature_names != body.model.feature_names {
        return Err(Error::Integrity("feature names disagree with the model".into()));
    }
    // re-run construction checks on the decoded shapes
    AdditiveModel::new(
        body.model.feature_names.clone(),
        body.model.intercept,
        body.model.mains.clone(),
        body.model.pairs.clone(),
        body.model.binner.clone(),
        body.model.pair_binner.clone(),
    )
    .map_err(|e| Error::Integrity(e.to_string()))?;
    Ok(body)
}

pub fn load_model(path: &Path) -> Result<ModelFile> {
    from_model_bytes(&fs::read(path)?)
}
