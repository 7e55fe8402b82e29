//! On-disk form of a dealt secret.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use hrqss::qudit::{QuditSpace, StateVector};
use hrqss::scheme::{DealtSecret, DrawRecord, SchemeFamily, SchemeSpec, ShareBundle};
use hrqss::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Amplitudes as `[re, im]` decimal strings with 17 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeDump {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[String; 2]>,
}

impl AmplitudeDump {
    pub fn from_state(state: &StateVector) -> Self {
        let amplitudes = state.amplitudes().iter().map(|a| [format!("{:.16e}", a.re), format!("{:.16e}", a.im)]).collect();
        AmplitudeDump { dims: state.space().dims().to_vec(), amplitudes }
    }

    pub fn to_state(&self) -> Result<StateVector> {
        let space = QuditSpace::new(self.dims.clone())?;
        let parse = |s: &str| s.parse::<f64>().map_err(|_| Error::param(format!("bad amplitude '{s}'")));
        let amps = self
            .amplitudes
            .iter()
            .map(|[re, im]| Ok(Complex64::new(parse(re)?, parse(im)?)))
            .collect::<Result<Vec<_>>>()?;
        StateVector::new(space, amps)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerRecord {
    pub player: usize,
    pub classical: Vec<NamedValue>,
    /// Global subsystems of the quantum dump held by this player.
    pub quantum: Vec<usize>,
    pub quantum_dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumHandle {
    /// Subsystems kept by the dealer and never handed out.
    pub discarded: Vec<usize>,
    pub state: AmplitudeDump,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShareBundleFile {
    pub format_version: u32,
    pub scheme: SchemeSpec,
    pub label: String,
    pub seed: u64,
    pub secret: AmplitudeDump,
    pub players: Vec<PlayerRecord>,
    pub quantum: QuantumHandle,
    pub randomness: Vec<DrawRecord>,
}

impl ShareBundleFile {
    pub fn from_dealt(dealt: &DealtSecret, seed: u64) -> Self {
        let players = dealt
            .bundles
            .iter()
            .map(|b| PlayerRecord {
                player: b.player,
                classical: b.classical.iter().map(|(name, value)| NamedValue { name: name.clone(), value: *value }).collect(),
                quantum: b.quantum.clone(),
                quantum_dims: b.quantum_dims.clone(),
            })
            .collect();
        ShareBundleFile {
            format_version: FORMAT_VERSION,
            scheme: dealt.descriptor.spec.clone(),
            label: dealt.descriptor.label(),
            seed,
            secret: AmplitudeDump::from_state(&dealt.secret),
            players,
            quantum: QuantumHandle {
                discarded: dealt.descriptor.discarded.clone(),
                state: AmplitudeDump::from_state(&dealt.state),
            },
            randomness: dealt.randomness.clone(),
        }
    }

    /// Rebuilds the dealt secret, checking the file against its family.
    pub fn to_dealt(&self, family: &dyn SchemeFamily) -> Result<DealtSecret> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::param(format!("unsupported bundle format version {}", self.format_version)));
        }
        let descriptor = family.descriptor().clone();
        if self.players.len() != descriptor.players() {
            return Err(Error::param(format!(
                "bundle lists {} players, scheme has {}",
                self.players.len(),
                descriptor.players()
            )));
        }
        let state = self.quantum.state.to_state()?;
        let bundles = self
            .players
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.player != i + 1 || p.quantum != descriptor.quantum[i] {
                    return Err(Error::param(format!("player record {} does not match the scheme layout", i + 1)));
                }
                Ok(ShareBundle {
                    player: p.player,
                    classical: p.classical.iter().map(|v| (v.name.clone(), v.value)).collect(),
                    quantum: p.quantum.clone(),
                    quantum_dims: p.quantum_dims.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DealtSecret { descriptor, secret: self.secret.to_state()?, state, bundles, randomness: self.randomness.clone() })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::param(format!("cannot encode bundle: {e}")))?;
        std::fs::write(path, text + "\n").map_err(|e| Error::param(format!("cannot write {}: {e}", path.display())))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::param(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::param(format!("malformed bundle {}: {e}", path.display())))
    }
}

/// Reads a secret given as a JSON list of `[re, im]` pairs, numbers or strings.
pub fn read_amplitude_file(path: &Path, space: QuditSpace) -> Result<StateVector> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Part {
        Num(f64),
        Text(String),
    }
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::param(format!("cannot read {}: {e}", path.display())))?;
    let pairs: Vec<[Part; 2]> = serde_json::from_str(&text)
        .map_err(|e| Error::param(format!("{}: expected a JSON list of [re, im] pairs ({e})", path.display())))?;
    let value = |p: &Part| match p {
        Part::Num(v) => Ok(*v),
        Part::Text(s) => s.parse::<f64>().map_err(|_| Error::param(format!("bad amplitude '{s}'"))),
    };
    let amps = pairs.iter().map(|[re, im]| Ok(Complex64::new(value(re)?, value(im)?))).collect::<Result<Vec<_>>>()?;
    if amps.len() != space.total_dim() {
        return Err(Error::DimensionMismatch { expected: space.total_dim(), found: amps.len() });
    }
    StateVector::new(space, amps)
}
