//! The versioned `xstate-v1` JSON state format.
//!
//! A state file carries either the matrix entries or the Bloch parameters:
//!
//! ```json
//! {"format": "xstate-v1", "rho": {"d": [0.437, 0.154, 0.037, 0.372],
//!  "rho14": [0.1, 0.0], "rho23": [0.0, 0.0]}}
//! ```
//!
//! ```json
//! {"format": "xstate-v1", "bloch": {"r": 0.182, "s": -0.052, "c3": 0.618,
//!  "c1": [0.2, 0.0], "c2": [-0.2, 0.0]}}
//! ```

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::xstate::{BlochX, XDensityMatrix, XStateError};

pub const STATE_FORMAT: &str = "xstate-v1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported format tag {found:?}, expected {STATE_FORMAT:?}")]
    WrongFormat { found: String },
    #[error("state file must carry exactly one of \"rho\" or \"bloch\"")]
    WrongPayload,
    #[error(transparent)]
    State(#[from] XStateError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<RhoJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bloch: Option<BlochJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RhoJson {
    /// Diagonal (rho11, rho22, rho33, rho44).
    pub d: [f64; 4],
    /// rho14 as [re, im].
    pub rho14: [f64; 2],
    /// rho23 as [re, im].
    pub rho23: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlochJson {
    pub r: f64,
    pub s: f64,
    pub c3: f64,
    pub c1: [f64; 2],
    pub c2: [f64; 2],
}

impl StateJson {
    pub fn from_density(dm: &XDensityMatrix) -> Self {
        StateJson {
            format: STATE_FORMAT.to_string(),
            rho: Some(RhoJson {
                d: dm.diag(),
                rho14: [dm.rho14().re, dm.rho14().im],
                rho23: [dm.rho23().re, dm.rho23().im],
            }),
            bloch: None,
        }
    }

    pub fn from_bloch(p: &BlochX) -> Self {
        StateJson {
            format: STATE_FORMAT.to_string(),
            rho: None,
            bloch: Some(BlochJson {
                r: p.r,
                s: p.s,
                c3: p.c3,
                c1: [p.c1.re, p.c1.im],
                c2: [p.c2.re, p.c2.im],
            }),
        }
    }

    /// Validates the payload into a density matrix.
    pub fn to_density(&self) -> Result<XDensityMatrix, FormatError> {
        if self.format != STATE_FORMAT {
            return Err(FormatError::WrongFormat { found: self.format.clone() });
        }
        match (&self.rho, &self.bloch) {
            (Some(rho), None) => Ok(XDensityMatrix::new(
                rho.d,
                C64::new(rho.rho14[0], rho.rho14[1]),
                C64::new(rho.rho23[0], rho.rho23[1]),
            )?),
            (None, Some(bloch)) => {
                let p = BlochX::new(
                    bloch.r,
                    bloch.s,
                    bloch.c3,
                    C64::new(bloch.c1[0], bloch.c1[1]),
                    C64::new(bloch.c2[0], bloch.c2[1]),
                );
                Ok(p.to_density()?)
            }
            _ => Err(FormatError::WrongPayload),
        }
    }
}

/// Parses and validates a state file.
pub fn parse_state(text: &str) -> Result<XDensityMatrix, FormatError> {
    let raw: StateJson = serde_json::from_str(text)?;
    raw.to_density()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xstate;

    #[test]
    fn rho_form_round_trips() {
        let dm = xstate::example_two();
        let text = serde_json::to_string(&StateJson::from_density(&dm)).unwrap();
        let back = parse_state(&text).unwrap();
        assert_eq!(back, dm);
    }

    #[test]
    fn bloch_form_parses_to_the_same_state() {
        let text = r#"{"format":"xstate-v1","bloch":{"r":0.182,"s":-0.052,"c3":0.618,
                       "c1":[0.2,0.0],"c2":[-0.2,0.0]}}"#;
        let dm = parse_state(text).unwrap();
        assert!(dm.to_matrix().max_abs_diff(&xstate::example_two().to_matrix()) < 1e-12);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(matches!(
            parse_state(r#"{"format":"xstate-v2","rho":{"d":[0.25,0.25,0.25,0.25],"rho14":[0,0],"rho23":[0,0]}}"#),
            Err(FormatError::WrongFormat { .. })
        ));
        assert!(matches!(
            parse_state(r#"{"format":"xstate-v1"}"#),
            Err(FormatError::WrongPayload)
        ));
        assert!(matches!(
            parse_state(r#"{"format":"xstate-v1","rho":{"d":[0.9,0.25,0.25,0.25],"rho14":[0,0],"rho23":[0,0]}}"#),
            Err(FormatError::State(XStateError::TraceNotOne { .. }))
        ));
        assert!(parse_state("not json").is_err());
    }
}
