//! Amplitude evolution of the coin ⊗ walker state on a cycle of coherent
//! sites.
//!
//! A state is stored as one `(c_↑, c_↓)` pair per site and stands for
//! `Σ_n Σ_s c_{n,s} |site_n⟩ ⊗ |s⟩`. The conditional shift maps site states onto
//! neighbouring site states exactly, so the pair sequence is a complete
//! representation in every frame; the frame only enters through the Gram
//! matrix when observables are computed.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::observables::{self, GramMatrix, StepObservables};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Whether the conditional shift carries the coin-branch phases `e^{∓iδθ·k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    /// The shift is the unitary `exp(−iδθ K₀ ⊗ σ_z)`, including the branch
    /// phases produced by the vacuum eigenvalue of `K₀`.
    #[default]
    Physical,
    /// Site relabelling only, `|ζ_n⟩|↑⟩ → |ζ_{n+1}⟩|↑⟩`, with no phases.
    PaperIdealized,
}

impl fmt::Display for PhaseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseMode::Physical => "physical",
            PhaseMode::PaperIdealized => "paper-idealized",
        })
    }
}

impl FromStr for PhaseMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "physical" => Ok(PhaseMode::Physical),
            "paper-idealized" => Ok(PhaseMode::PaperIdealized),
            other => Err(format!(
                "unknown phase mode `{other}` (expected physical or paper-idealized)"
            )),
        }
    }
}

/// A unitary 2×2 matrix acting on `(|↑⟩, |↓⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator {
    matrix: [[C64; 2]; 2],
}

impl CoinOperator {
    pub fn new(matrix: [[C64; 2]; 2]) -> Result<Self> {
        let coin = CoinOperator { matrix };
        let deviation = coin.unitarity_deviation();
        if !(deviation <= 1e-12) {
            return Err(Error::NonUnitaryCoin { deviation });
        }
        Ok(coin)
    }

    pub fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        CoinOperator {
            matrix: [[h, h], [h, -h]],
        }
    }

    pub fn identity() -> Self {
        CoinOperator {
            matrix: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    /// `R_z(α) R_y(β) R_z(γ)`.
    pub fn su2(alpha: f64, beta: f64, gamma: f64) -> Self {
        let (s, c) = (0.5 * beta).sin_cos();
        let e = |phi: f64| C64::from_polar(1.0, phi);
        CoinOperator {
            matrix: [
                [
                    e(-0.5 * (alpha + gamma)) * c,
                    -e(-0.5 * (alpha - gamma)) * s,
                ],
                [e(0.5 * (alpha - gamma)) * s, e(0.5 * (alpha + gamma)) * c],
            ],
        }
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        let m = self.matrix;
        CoinOperator {
            matrix: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn compose(&self, rhs: &CoinOperator) -> CoinOperator {
        let (a, b) = (self.matrix, rhs.matrix);
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        CoinOperator { matrix: out }
    }

    pub fn determinant(&self) -> C64 {
        let m = self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    #[inline]
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.matrix;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    fn unitarity_deviation(&self) -> f64 {
        let p = self.compose(&self.adjoint()).matrix;
        let mut worst = 0.0f64;
        for (i, row) in p.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }
}

pub fn hadamard() -> CoinOperator {
    CoinOperator::hadamard()
}

/// Validates a coin state, returning it unchanged.
pub fn validate_coin_state(coin: [C64; 2]) -> Result<[C64; 2]> {
    let norm_sqr = coin[0].norm_sqr() + coin[1].norm_sqr();
    if !norm_sqr.is_finite() {
        return Err(Error::NonFinite {
            name: "coin",
            value: norm_sqr,
        });
    }
    if (norm_sqr - 1.0).abs() > 1e-12 {
        let n = norm_sqr.sqrt();
        let suggestion = if n > 0.0 {
            (coin[0] / n, coin[1] / n)
        } else {
            (ONE, ZERO)
        };
        return Err(Error::UnnormalizedCoin {
            norm_sqr,
            suggestion,
        });
    }
    Ok(coin)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `↑` moves to `n + 1`, `↓` to `n − 1`.
    Forward,
    /// The inverse relabelling.
    Backward,
}

/// Snapshot of the walker ⊗ coin amplitudes on a cycle of `sites` points.
///
/// Storage index `i` holds site label `n = i − ⌊L/2⌋`, so labels run over
/// `[−⌊L/2⌋, L − ⌊L/2⌋)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    amplitudes: Vec<[C64; 2]>,
    frame: Frame,
    phase_mode: PhaseMode,
    step_count: usize,
}

impl WalkState {
    pub fn initial(
        sites: usize,
        start: i64,
        coin: [C64; 2],
        frame: Frame,
        phase_mode: PhaseMode,
    ) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidParameter {
                name: "sites",
                value: 0.0,
                reason: "need at least one site",
            });
        }
        frame.validate()?;
        let coin = validate_coin_state(coin)?;
        let offset = (sites / 2) as i64;
        let (min, max) = (-offset, sites as i64 - offset);
        if start < min || start >= max {
            return Err(Error::SiteOutOfRange {
                site: start,
                min,
                max,
            });
        }
        let mut amplitudes = vec![[ZERO; 2]; sites];
        amplitudes[(start + offset) as usize] = coin;
        Ok(WalkState {
            amplitudes,
            frame,
            phase_mode,
            step_count: 0,
        })
    }

    /// Builds a state from raw amplitudes without normalization checks.
    pub fn from_amplitudes(
        amplitudes: Vec<[C64; 2]>,
        frame: Frame,
        phase_mode: PhaseMode,
        step_count: usize,
    ) -> Self {
        WalkState {
            amplitudes,
            frame,
            phase_mode,
            step_count,
        }
    }

    pub fn sites(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn phase_mode(&self) -> PhaseMode {
        self.phase_mode
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    pub fn amplitudes(&self) -> &[[C64; 2]] {
        &self.amplitudes
    }

    pub fn label(&self, index: usize) -> i64 {
        index as i64 - (self.sites() / 2) as i64
    }

    pub fn index(&self, label: i64) -> usize {
        (label + (self.sites() / 2) as i64).rem_euclid(self.sites() as i64) as usize
    }

    pub fn amplitude(&self, label: i64) -> [C64; 2] {
        self.amplitudes[self.index(label)]
    }

    /// Angular spacing `2π / L`.
    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.sites() as f64
    }

    /// `Σ |c|²`, the norm only when the frame is orthonormal.
    pub fn coefficient_norm_sqr(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|p| p[0].norm_sqr() + p[1].norm_sqr())
            .sum()
    }

    pub fn coin_flip(&self, coin: &CoinOperator) -> WalkState {
        WalkState {
            amplitudes: self.amplitudes.iter().map(|&p| coin.apply(p)).collect(),
            ..self.clone()
        }
    }

    /// Forward conditional shift with branch-phase weight `vacuum_weight`
    /// (ignored in [`PhaseMode::PaperIdealized`]).
    pub fn shift(&self, vacuum_weight: f64) -> WalkState {
        self.shift_in(Direction::Forward, vacuum_weight)
    }

    pub fn shift_in(&self, direction: Direction, vacuum_weight: f64) -> WalkState {
        let len = self.sites();
        let phi = match self.phase_mode {
            PhaseMode::Physical => self.dtheta() * vacuum_weight,
            PhaseMode::PaperIdealized => 0.0,
        };
        let (up_move, up_phase) = match direction {
            Direction::Forward => (1, -phi),
            Direction::Backward => (len - 1, phi),
        };
        let down_move = len - up_move;
        let up_factor = C64::from_polar(1.0, up_phase);
        let down_factor = up_factor.conj();
        let mut amplitudes = vec![[ZERO; 2]; len];
        for (i, p) in self.amplitudes.iter().enumerate() {
            amplitudes[(i + up_move) % len][0] = p[0] * up_factor;
            amplitudes[(i + down_move) % len][1] = p[1] * down_factor;
        }
        WalkState {
            amplitudes,
            ..self.clone()
        }
    }

    /// One coin flip followed by the conditional shift.
    pub fn step(&self, coin: &CoinOperator) -> WalkState {
        let mut next = self.coin_flip(coin).shift(self.frame.vacuum_weight());
        next.step_count += 1;
        next
    }

    /// Undoes [`WalkState::step`] for the same coin.
    pub fn inverse_step(&self, coin: &CoinOperator) -> WalkState {
        let mut prev = self
            .shift_in(Direction::Backward, self.frame.vacuum_weight())
            .coin_flip(&coin.adjoint());
        prev.step_count = prev.step_count.saturating_sub(1);
        prev
    }
}

/// Everything needed to reproduce one walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    pub sites: usize,
    pub start: i64,
    pub coin_state: [C64; 2],
    pub coin: CoinOperator,
    pub frame: Frame,
    pub phase_mode: PhaseMode,
    pub steps: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            sites: 200,
            start: 0,
            coin_state: [ONE, ZERO],
            coin: CoinOperator::hadamard(),
            frame: Frame::Ideal,
            phase_mode: PhaseMode::Physical,
            steps: 40,
        }
    }
}

/// States and observables for `l = 0..=steps`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub gram: GramMatrix,
    pub states: Vec<WalkState>,
    pub observables: Vec<StepObservables>,
}

impl Trajectory {
    pub fn last_state(&self) -> &WalkState {
        self.states
            .last()
            .expect("trajectory holds the initial state")
    }

    pub fn last(&self) -> &StepObservables {
        self.observables
            .last()
            .expect("trajectory holds the initial state")
    }
}

/// Evolves `cfg` and measures every step in the configured frame.
pub fn run(cfg: &WalkConfig) -> Result<Trajectory> {
    let gram = GramMatrix::new(&cfg.frame, cfg.sites)?;
    run_with_gram(cfg, gram)
}

/// As [`run`], measuring in `gram` instead of the frame's own Gram matrix.
pub fn run_with_gram(cfg: &WalkConfig, gram: GramMatrix) -> Result<Trajectory> {
    if gram.sites() != cfg.sites {
        return Err(Error::DimensionMismatch {
            expected: cfg.sites,
            found: gram.sites(),
        });
    }
    let mut state = WalkState::initial(
        cfg.sites,
        cfg.start,
        cfg.coin_state,
        cfg.frame,
        cfg.phase_mode,
    )?;
    let mut states = Vec::with_capacity(cfg.steps + 1);
    let mut obs = Vec::with_capacity(cfg.steps + 1);
    for l in 0..=cfg.steps {
        if l > 0 {
            state = state.step(&cfg.coin);
        }
        obs.push(observables::measure(&state, &gram)?);
        states.push(state.clone());
    }
    Ok(Trajectory {
        gram,
        states,
        observables: obs,
    })
}
