use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use puzzlegram_core::LayerId;
use serde::{Deserialize, Serialize};

use crate::split::{split_stem, SEGMENTS_PER_LAYER};
use crate::stem::{read_wav, write_wav, Stem};
use crate::AudioError;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Index of the split song. Segment paths are relative to the manifest's
/// directory and listed in song order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SongManifest {
    pub song_id: String,
    pub sample_rate: u32,
    pub channels: u16,
    pub total_frames: u64,
    pub segment_frames: Vec<u64>,
    pub layers: BTreeMap<LayerId, Vec<String>>,
    pub created_with_seed: u64,
}

impl SongManifest {
    pub fn segment_path(&self, base: &Path, layer: LayerId, order: usize) -> Option<PathBuf> {
        self.layers
            .get(&layer)
            .and_then(|paths| paths.get(order.checked_sub(1)?))
            .map(|p| base.join(p))
    }

    pub fn to_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("manifest serializes");
        json.push('\n');
        json
    }
}

pub fn segment_file_name(layer: LayerId, order: usize) -> String {
    format!("{layer}_{order:02}.wav")
}

fn load_stems(stem_dir: &Path) -> Result<Vec<Stem>, AudioError> {
    let mut found = BTreeMap::new();
    let mut unexpected = Vec::new();
    for entry in fs::read_dir(stem_dir)? {
        let path = entry?.path();
        let is_wav = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("wav"));
        if !is_wav {
            continue;
        }
        let stem_name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_owned();
        match stem_name.parse::<LayerId>() {
            Ok(layer) => {
                found.insert(layer, path);
            }
            Err(_) => unexpected.push(stem_name),
        }
    }
    let missing: Vec<&str> = LayerId::ALL
        .iter()
        .filter(|l| !found.contains_key(l))
        .map(|l| l.as_str())
        .collect();
    if !missing.is_empty() || !unexpected.is_empty() {
        unexpected.sort();
        return Err(AudioError::Layout(format!(
            "missing stems [{}], unexpected stems [{}]",
            missing.join(", "),
            unexpected.join(", ")
        )));
    }
    found
        .into_iter()
        .map(|(layer, path)| Stem::read(layer, &path))
        .collect()
}

/// Splits the four stems in `stem_dir` into `out_dir` and writes the manifest.
///
/// The seed is recorded for provenance only; segment files stay in song order.
pub fn build_manifest(stem_dir: &Path, seed: u64, out_dir: &Path) -> Result<SongManifest, AudioError> {
    let stems = load_stems(stem_dir)?;
    let first = &stems[0];
    for stem in &stems[1..] {
        if (stem.sample_rate, stem.channels, stem.frames())
            != (first.sample_rate, first.channels, first.frames())
        {
            return Err(AudioError::Consistency(format!(
                "{} is {} Hz × {} ch × {} frames but {} is {} Hz × {} ch × {} frames",
                stem.layer_id,
                stem.sample_rate,
                stem.channels,
                stem.frames(),
                first.layer_id,
                first.sample_rate,
                first.channels,
                first.frames()
            )));
        }
    }

    fs::create_dir_all(out_dir)?;
    let mut layers = BTreeMap::new();
    let mut segment_frames = Vec::new();
    for stem in &stems {
        let segments = split_stem(stem, SEGMENTS_PER_LAYER)?;
        segment_frames = segments.iter().map(|s| s.frames as u64).collect();
        let mut paths = Vec::with_capacity(SEGMENTS_PER_LAYER);
        for segment in &segments {
            let name = segment_file_name(stem.layer_id, segment.order);
            write_wav(
                &out_dir.join(&name),
                stem.sample_rate,
                stem.channels,
                &segment.samples,
            )?;
            paths.push(name);
        }
        layers.insert(stem.layer_id, paths);
    }

    let song_id = stem_dir
        .canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "song".to_owned());
    let manifest = SongManifest {
        song_id,
        sample_rate: first.sample_rate,
        channels: first.channels,
        total_frames: first.frames() as u64,
        segment_frames,
        layers,
        created_with_seed: seed,
    };
    fs::write(out_dir.join(MANIFEST_FILE), manifest.to_json())?;
    Ok(manifest)
}

pub fn load_manifest(path: &Path) -> Result<SongManifest, AudioError> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|source| AudioError::Manifest {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    MissingLayer { layer: LayerId },
    SegmentCount { layer: Option<LayerId>, expected: usize, actual: usize },
    FrameSum { expected: u64, actual: u64 },
    UnevenSegments { min: u64, max: u64 },
    MissingFile { path: PathBuf },
    Undecodable { path: PathBuf, reason: String },
    FormatMismatch { path: PathBuf, sample_rate: u32, channels: u16 },
    FrameCount { path: PathBuf, expected: u64, actual: u64 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the manifest's arithmetic and every segment file under `base_dir`.
pub fn validate_manifest(manifest: &SongManifest, base_dir: &Path) -> ValidationReport {
    let mut violations = Vec::new();
    let frames = &manifest.segment_frames;

    if frames.len() != SEGMENTS_PER_LAYER {
        violations.push(Violation::SegmentCount {
            layer: None,
            expected: SEGMENTS_PER_LAYER,
            actual: frames.len(),
        });
    }
    let sum: u64 = frames.iter().sum();
    if sum != manifest.total_frames {
        violations.push(Violation::FrameSum {
            expected: manifest.total_frames,
            actual: sum,
        });
    }
    if let (Some(&min), Some(&max)) = (frames.iter().min(), frames.iter().max()) {
        if max - min > 1 {
            violations.push(Violation::UnevenSegments { min, max });
        }
    }

    for layer in LayerId::ALL {
        let Some(paths) = manifest.layers.get(&layer) else {
            violations.push(Violation::MissingLayer { layer });
            continue;
        };
        if paths.len() != SEGMENTS_PER_LAYER {
            violations.push(Violation::SegmentCount {
                layer: Some(layer),
                expected: SEGMENTS_PER_LAYER,
                actual: paths.len(),
            });
        }
        for (i, rel) in paths.iter().enumerate() {
            let path = base_dir.join(rel);
            if !path.is_file() {
                violations.push(Violation::MissingFile { path });
                continue;
            }
            match read_wav(&path) {
                Err(err) => violations.push(Violation::Undecodable {
                    path,
                    reason: err.to_string(),
                }),
                Ok((sample_rate, channels, samples)) => {
                    if (sample_rate, channels) != (manifest.sample_rate, manifest.channels) {
                        violations.push(Violation::FormatMismatch {
                            path: path.clone(),
                            sample_rate,
                            channels,
                        });
                    }
                    let actual = (samples.len() / channels.max(1) as usize) as u64;
                    if let Some(&expected) = frames.get(i) {
                        if actual != expected {
                            violations.push(Violation::FrameCount {
                                path,
                                expected,
                                actual,
                            });
                        }
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

/// Loads `path` and validates it against files next to it.
pub fn validate_manifest_file(path: &Path) -> Result<ValidationReport, AudioError> {
    let manifest = load_manifest(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    Ok(validate_manifest(&manifest, base))
}
