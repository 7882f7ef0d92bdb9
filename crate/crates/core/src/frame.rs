use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su11::{hw_overlap, su11_overlap, SU11Params};
use crate::C64;

/// Basis in which the walker's site states live.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Frame {
    /// Orthonormal sites: the textbook walk on a cycle.
    Ideal,
    /// Heisenberg-Weyl coherent states `|α e^{iθ_n}⟩`.
    #[serde(rename = "hw")]
    HeisenbergWeyl { alpha_mag: f64 },
    /// SU(1,1) coherent states `|k, r e^{iθ_n}⟩`.
    #[serde(rename = "su11")]
    SU11 { k: f64, r: f64 },
}

impl Frame {
    pub fn hw(alpha_mag: f64) -> Result<Self> {
        crate::su11::HWParams::new(alpha_mag, 0.0)?;
        Ok(Frame::HeisenbergWeyl { alpha_mag })
    }

    pub fn su11(k: f64, r: f64) -> Result<Self> {
        SU11Params::new(k, r, 0.0)?;
        Ok(Frame::SU11 { k, r })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Frame::Ideal => Ok(()),
            Frame::HeisenbergWeyl { alpha_mag } => Frame::hw(alpha_mag).map(drop),
            Frame::SU11 { k, r } => Frame::su11(k, r).map(drop),
        }
    }

    /// `⟨site_m | site_n⟩` for sites separated by `m − n` (mod `sites`) on a
    /// cycle of `sites` points.
    pub fn overlap(&self, m: i64, n: i64, sites: usize) -> Result<C64> {
        self.kernel((m - n).rem_euclid(sites as i64) as usize, sites)
    }

    /// Overlap for a site offset `d = m − n (mod sites)`.
    pub(crate) fn kernel(&self, d: usize, sites: usize) -> Result<C64> {
        if d.is_multiple_of(sites) {
            return Ok(C64::new(1.0, 0.0));
        }
        self.overlap_angle(2.0 * PI * d as f64 / sites as f64)
    }

    /// `⟨θ_m | θ_n⟩` as a function of `dtheta = θ_m − θ_n`.
    pub fn overlap_angle(&self, dtheta: f64) -> Result<C64> {
        match *self {
            Frame::Ideal => {
                let d = crate::su11::normalize_angle(crate::error::finite("dtheta", dtheta)?);
                Ok(C64::new(if d == 0.0 { 1.0 } else { 0.0 }, 0.0))
            }
            Frame::HeisenbergWeyl { alpha_mag } => hw_overlap(alpha_mag, -dtheta),
            Frame::SU11 { k, r } => su11_overlap(k, r, dtheta),
        }
    }

    /// Eigenvalue of the generator of rotations on the walker's reference
    /// state. Under `exp(∓iδθ K₀)` each coin branch picks up `e^{∓iδθ·w}`.
    pub fn vacuum_weight(&self) -> f64 {
        match *self {
            Frame::SU11 { k, .. } => k,
            // a†a|0⟩ = 0, and the ideal frame has no generator at all
            Frame::Ideal | Frame::HeisenbergWeyl { .. } => 0.0,
        }
    }

    pub fn is_orthonormal(&self) -> bool {
        matches!(self, Frame::Ideal)
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frame::Ideal => write!(f, "ideal"),
            Frame::HeisenbergWeyl { alpha_mag } => write!(f, "hw:{alpha_mag}"),
            Frame::SU11 { k, r } => write!(f, "su11:{k},{r}"),
        }
    }
}

impl std::str::FromStr for Frame {
    type Err = String;

    /// Parses `ideal`, `hw:<|α|>` or `su11:<k>,<r>`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let num = |v: &str, what: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("cannot parse {what} from `{v}`"))
        };
        let frame = if s.eq_ignore_ascii_case("ideal") {
            Frame::Ideal
        } else if let Some(rest) = s.strip_prefix("hw:") {
            Frame::HeisenbergWeyl {
                alpha_mag: num(rest, "|alpha|")?,
            }
        } else if let Some(rest) = s.strip_prefix("su11:") {
            let (k, r) = rest
                .split_once(',')
                .ok_or_else(|| format!("expected `su11:k,r`, got `{s}`"))?;
            Frame::SU11 {
                k: num(k, "k")?,
                r: num(r, "r")?,
            }
        } else {
            return Err(format!(
                "unknown frame `{s}` (expected ideal, hw:<alpha>, su11:<k>,<r>)"
            ));
        };
        frame.validate().map_err(|e: Error| e.to_string())?;
        Ok(frame)
    }
}
