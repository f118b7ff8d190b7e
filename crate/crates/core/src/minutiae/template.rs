//! Line-oriented minutiae template file:
//!
//! ```text
//! BIOSTEGO-TPL v1 <user_id> <width> <height> <D>
//! <x> <y> <theta> <kind> <ridge_id> <n> <s1> ... <sn>
//! ```
//!
//! Angles and ridge samples carry six decimal places; the format is
//! bit-exact so independently produced templates can be diffed. Unknown
//! versions are rejected.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use super::{MinutiaKind, MAX_RIDGE_SAMPLES};

const MAGIC: &str = "BIOSTEGO-TPL";
const VERSION: &str = "v1";

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("not a template file (bad magic)")]
    BadMagic,
    #[error("unsupported template version {0}")]
    UnsupportedVersion(String),
    #[error("malformed template at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One stored minutia: position, orientation, kind, ridge id and the
/// local-frame x-coordinates sampled along its ridge.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateMinutia {
    pub x: u32,
    pub y: u32,
    pub theta: f64,
    pub kind: MinutiaKind,
    pub ridge_id: u32,
    pub samples: Vec<f64>,
}

/// The per-user minutiae set persisted by enrollment.
#[derive(Debug, Clone, PartialEq)]
pub struct MinutiaeTemplate {
    pub user_id: String,
    pub width: u32,
    pub height: u32,
    /// Average inter-ridge distance D of the enrollment skeleton.
    pub ridge_distance: f64,
    pub minutiae: Vec<TemplateMinutia>,
}

impl MinutiaeTemplate {
    pub fn serialize(&self) -> String {
        let mut out = format!(
            "{MAGIC} {VERSION} {} {} {} {:.6}\n",
            self.user_id, self.width, self.height, self.ridge_distance
        );
        for m in &self.minutiae {
            write!(
                out,
                "{} {} {:.6} {} {} {}",
                m.x,
                m.y,
                m.theta,
                m.kind.as_str(),
                m.ridge_id,
                m.samples.len()
            )
            .unwrap();
            for s in &m.samples {
                write!(out, " {s:.6}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, TemplateError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(TemplateError::BadMagic)?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.first() != Some(&MAGIC) {
            return Err(TemplateError::BadMagic);
        }
        if fields.get(1) != Some(&VERSION) {
            return Err(TemplateError::UnsupportedVersion(
                fields.get(1).unwrap_or(&"<missing>").to_string(),
            ));
        }
        if fields.len() != 6 {
            return Err(TemplateError::Malformed {
                line: 1,
                reason: format!("expected 6 header fields, got {}", fields.len()),
            });
        }
        let malformed = |line: usize, reason: &str| TemplateError::Malformed {
            line,
            reason: reason.to_string(),
        };
        let user_id = fields[2].to_string();
        let width: u32 = fields[3].parse().map_err(|_| malformed(1, "bad width"))?;
        let height: u32 = fields[4].parse().map_err(|_| malformed(1, "bad height"))?;
        let ridge_distance: f64 = fields[5].parse().map_err(|_| malformed(1, "bad D"))?;
        if ridge_distance.is_nan() || ridge_distance <= 0.0 {
            return Err(malformed(1, "D must be positive"));
        }

        let mut minutiae = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() < 6 {
                return Err(malformed(lineno, "expected at least 6 fields"));
            }
            let x: u32 = f[0].parse().map_err(|_| malformed(lineno, "bad x"))?;
            let y: u32 = f[1].parse().map_err(|_| malformed(lineno, "bad y"))?;
            let theta: f64 = f[2].parse().map_err(|_| malformed(lineno, "bad theta"))?;
            if !theta.is_finite() {
                return Err(malformed(lineno, "theta not finite"));
            }
            let kind = match f[3] {
                "termination" => MinutiaKind::Termination,
                "bifurcation" => MinutiaKind::Bifurcation,
                other => {
                    return Err(TemplateError::Malformed {
                        line: lineno,
                        reason: format!("unknown minutia kind {other:?}"),
                    })
                }
            };
            let ridge_id: u32 = f[4].parse().map_err(|_| malformed(lineno, "bad ridge id"))?;
            let n: usize = f[5].parse().map_err(|_| malformed(lineno, "bad sample count"))?;
            if n > MAX_RIDGE_SAMPLES {
                return Err(malformed(lineno, "too many ridge samples"));
            }
            if f.len() != 6 + n {
                return Err(TemplateError::Malformed {
                    line: lineno,
                    reason: format!("expected {n} samples, got {}", f.len() - 6),
                });
            }
            let mut samples = Vec::with_capacity(n);
            for s in &f[6..] {
                samples.push(s.parse().map_err(|_| malformed(lineno, "bad sample"))?);
            }
            minutiae.push(TemplateMinutia { x, y, theta, kind, ridge_id, samples });
        }
        Ok(Self { user_id, width, height, ridge_distance, minutiae })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), TemplateError> {
        std::fs::write(path, self.serialize())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TemplateError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}
