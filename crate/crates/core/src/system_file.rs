//! JSON system and measure descriptions.
//!
//! A system file is either a builtin reference
//! `{"builtin": "heat" | "wave", "modes": N}` or an explicit mode list
//! `{"modes": [{"lambda_re", "lambda_im", "c_re", "c_im"}, …], "label": s}`.
//! A measure file is `{"atoms": [{"re", "im", "mass"}, …]}`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::system::{heat_system, wave_system, Atom, DiagonalSystem, PointMeasure};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeRecord {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub c_re: f64,
    pub c_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitSystemFile {
    pub modes: Vec<ModeRecord>,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    Heat,
    Wave,
}

impl Builtin {
    pub fn build(self, modes: usize) -> Result<DiagonalSystem> {
        match self {
            Builtin::Heat => heat_system(modes),
            Builtin::Wave => wave_system(modes),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuiltinSystemFile {
    pub builtin: Builtin,
    pub modes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub re: f64,
    pub im: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureFile {
    pub atoms: Vec<AtomRecord>,
}

impl From<&DiagonalSystem> for ExplicitSystemFile {
    fn from(system: &DiagonalSystem) -> Self {
        Self {
            modes: system
                .modes()
                .iter()
                .map(|m| ModeRecord {
                    lambda_re: m.eigenvalue.re,
                    lambda_im: m.eigenvalue.im,
                    c_re: m.coefficient.re,
                    c_im: m.coefficient.im,
                })
                .collect(),
            label: system.label().to_string(),
            truncation_note: system.truncation_note().map(str::to_string),
        }
    }
}

impl ExplicitSystemFile {
    pub fn into_system(self) -> Result<DiagonalSystem> {
        if let Some(i) = self.modes.iter().position(|m| m.lambda_re > 0.0) {
            return Err(Error::Parse(format!(
                "mode {i}: Re(lambda) = {} > 0 (eigenvalues must lie in the closed left half-plane)",
                self.modes[i].lambda_re
            )));
        }
        let sys = DiagonalSystem::from_pairs(
            self.modes.iter().map(|m| {
                (
                    Complex64::new(m.lambda_re, m.lambda_im),
                    Complex64::new(m.c_re, m.c_im),
                )
            }),
            self.label,
        )?;
        Ok(match self.truncation_note {
            Some(note) => sys.with_truncation_note(note),
            None => sys,
        })
    }
}

/// Parses a system description from JSON text.
pub fn parse_system(text: &str) -> Result<DiagonalSystem> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if value.get("builtin").is_some() {
        let b: BuiltinSystemFile =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        return b.builtin.build(b.modes);
    }
    match value.get("modes") {
        Some(Value::Array(_)) => {
            let explicit: ExplicitSystemFile =
                serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
            explicit.into_system()
        }
        _ => Err(Error::Parse(
            "expected {\"builtin\": ..., \"modes\": N} or {\"modes\": [...], \"label\": ...}"
                .to_string(),
        )),
    }
}

pub fn read_system(path: &Path) -> Result<DiagonalSystem> {
    parse_system(&std::fs::read_to_string(path)?)
}

pub fn system_to_json(system: &DiagonalSystem) -> String {
    serde_json::to_string_pretty(&ExplicitSystemFile::from(system))
        .expect("system records always serialize")
}

pub fn parse_measure(text: &str) -> Result<PointMeasure> {
    let file: MeasureFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    PointMeasure::new(
        file.atoms
            .iter()
            .map(|a| Atom {
                location: Complex64::new(a.re, a.im),
                mass: a.mass,
            })
            .collect(),
    )
    .map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_measure(path: &Path) -> Result<PointMeasure> {
    parse_measure(&std::fs::read_to_string(path)?)
}

pub fn measure_to_json(measure: &PointMeasure) -> String {
    let file = MeasureFile {
        atoms: measure
            .atoms()
            .iter()
            .map(|a| AtomRecord {
                re: a.location.re,
                im: a.location.im,
                mass: a.mass,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("measure records always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_reference() {
        let s = parse_system(r#"{"builtin": "heat", "modes": 4}"#).unwrap();
        assert_eq!(s.len(), 4);
        let w = parse_system(r#"{"builtin": "wave", "modes": 3}"#).unwrap();
        assert_eq!(w.len(), 6);
    }

    #[test]
    fn explicit_modes() {
        let s = parse_system(
            r#"{"modes": [{"lambda_re": -1, "lambda_im": 2, "c_re": 1, "c_im": 0}], "label": "x"}"#,
        )
        .unwrap();
        assert_eq!(s.label(), "x");
        assert_eq!(s.modes()[0].eigenvalue, Complex64::new(-1.0, 2.0));
    }

    #[test]
    fn positive_real_part_names_index() {
        let err = parse_system(
            r#"{"modes": [
                {"lambda_re": -1, "lambda_im": 0, "c_re": 1, "c_im": 0},
                {"lambda_re": -2, "lambda_im": 0, "c_re": 1, "c_im": 0},
                {"lambda_re": 0.5, "lambda_im": 0, "c_re": 1, "c_im": 0}
            ], "label": "bad"}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("mode 2"), "{msg}");
    }

    #[test]
    fn garbage_rejected() {
        assert!(matches!(parse_system("{}"), Err(Error::Parse(_))));
        assert!(matches!(parse_system("not json"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_system(r#"{"builtin": "plate", "modes": 3}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn builtin_round_trip_is_bit_exact() {
        for sys in [heat_system(37).unwrap(), wave_system(23).unwrap()] {
            let back = parse_system(&system_to_json(&sys)).unwrap();
            assert_eq!(back.modes(), sys.modes());
            assert_eq!(back.label(), sys.label());
            assert_eq!(back.truncation_note(), sys.truncation_note());
        }
    }

    #[test]
    fn measure_file() {
        let mu = parse_measure(r#"{"atoms": [{"re": 1, "im": 0, "mass": 2}]}"#).unwrap();
        assert_eq!(mu.total_mass(), 2.0);
        assert!(parse_measure(r#"{"atoms": [{"re": -1, "im": 0, "mass": 2}]}"#).is_err());
        assert!(parse_measure(r#"{"atoms": [{"re": 1, "im": 0, "mass": 0}]}"#).is_err());
        let back = parse_measure(&measure_to_json(&mu)).unwrap();
        assert_eq!(back, mu);
    }
}
