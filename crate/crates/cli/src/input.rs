use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use bicubic_core::{BicubicImpedance, Netlist, NetlistJson, RationalFunction};
use clap::Args;
use serde::Deserialize;

use crate::Failure;

/// Impedance coefficients, from a JSON file `{"a":[...],"d":[...]}` or inline.
#[derive(Debug, Clone, Args)]
pub struct ImpedanceArgs {
    /// JSON file with "a" and "d", highest power first; "-" reads stdin.
    pub input: Option<PathBuf>,
    /// Numerator coefficients, highest power first (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<f64>>,
    /// Denominator coefficients, highest power first (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub d: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffFile {
    a: Vec<f64>,
    d: Vec<f64>,
}

/// Coefficients as given, highest power first.
#[derive(Debug, Clone, PartialEq)]
pub struct Coeffs {
    pub a: Vec<f64>,
    pub d: Vec<f64>,
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::malformed(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
    }
}

impl ImpedanceArgs {
    pub fn is_given(&self) -> bool {
        self.input.is_some() || self.a.is_some() || self.d.is_some()
    }

    pub fn coeffs(&self) -> Result<Coeffs, Failure> {
        let c = match (&self.input, &self.a, &self.d) {
            (Some(path), None, None) => {
                let f: CoeffFile = serde_json::from_str(&read_text(path)?)
                    .map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
                Coeffs { a: f.a, d: f.d }
            }
            (None, Some(a), Some(d)) => Coeffs { a: a.clone(), d: d.clone() },
            _ => return Err(Failure::malformed("give an input file or both --a and --d".into())),
        };
        if c.a.len() != c.d.len() || !(c.a.len() == 3 || c.a.len() == 4) {
            return Err(Failure::malformed(format!(
                "expected 4+4 (bicubic) or 3+3 (biquadratic) coefficients, got {}+{}",
                c.a.len(),
                c.d.len()
            )));
        }
        if c.a.iter().chain(&c.d).any(|x| !x.is_finite()) {
            return Err(Failure::malformed("coefficients must be finite".into()));
        }
        Ok(c)
    }
}

impl Coeffs {
    pub fn is_bicubic(&self) -> bool {
        self.a.len() == 4
    }

    pub fn bicubic(&self) -> Result<BicubicImpedance, Failure> {
        if !self.is_bicubic() {
            return Err(Failure::malformed("this command needs 4+4 bicubic coefficients".into()));
        }
        let arr = |v: &[f64]| [v[0], v[1], v[2], v[3]];
        BicubicImpedance::new(arr(&self.a), arr(&self.d)).map_err(Failure::from)
    }

    pub fn rational(&self) -> Result<RationalFunction, Failure> {
        let asc = |v: &[f64]| v.iter().rev().copied().collect::<Vec<f64>>();
        RationalFunction::from_coeffs(&asc(&self.a), &asc(&self.d)).map_err(Failure::from)
    }
}

pub fn read_netlist(path: &Path) -> Result<Netlist, Failure> {
    let j: NetlistJson = serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
    Netlist::try_from(&j).map_err(|e| Failure::malformed(e.to_string()))
}
