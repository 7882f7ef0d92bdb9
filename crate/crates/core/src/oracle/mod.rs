//! Ground-truth walk in the truncated ladder basis `|k, m⟩ ⊗ {|↑⟩, |↓⟩}`.
//!
//! The conditional shift `exp(−iδθ K₀ ⊗ σ_z)` is diagonal in this basis, so
//! stepping introduces no truncation error beyond the initial expansion.
//! Nothing here reads the Gram matrix or the site amplitudes of
//! [`crate::walk`]; [`cross_check`] compares the two engines.

mod expm;
mod ladder;

pub use expm::expm;
pub use ladder::LadderOperators;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::observables::{binary_entropy, BlochVector, ProbabilityDistribution};
use crate::su11::{
    disk_coefficients, map_one_mode, required_cutoff, two_mode_offset, HyperboloidPoint,
    LadderCoefficients, SU11Params,
};
use crate::walk::{self, validate_coin_state, CoinOperator, PhaseMode, WalkConfig};
use crate::C64;

/// Tail weight tolerated by default when sizing the ladder.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Physical reading of the ladder index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Realization {
    /// Abstract `|k, m⟩`, any `k > 0`.
    Ladder,
    /// `K₊ = (a†)²/2`, `k ∈ {1/4, 3/4}`.
    OneMode,
    /// `K₊ = a†b†`, `2k ∈ {1, 2, 3, …}`.
    TwoMode,
}

impl Realization {
    fn check(self, k: f64) -> Result<()> {
        match self {
            Realization::Ladder => Ok(()),
            Realization::OneMode => map_one_mode(k, 0).map(drop),
            Realization::TwoMode => two_mode_offset(k).map(drop),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    pub k: f64,
    /// Squeeze radius of the walker's site states.
    pub r: f64,
    pub cutoff: usize,
    /// `psi[m] = (⟨k,m;↑|ψ⟩, ⟨k,m;↓|ψ⟩)`.
    pub psi: Vec<[C64; 2]>,
    pub realization: Realization,
    pub tail_bound: f64,
    pub step_count: usize,
}

/// Starting point of an oracle run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleInit {
    pub k: f64,
    pub r: f64,
    pub theta: f64,
    pub coin: [C64; 2],
    pub realization: Realization,
    /// `None` sizes the ladder from `tail_tolerance`.
    pub cutoff: Option<usize>,
    pub tail_tolerance: f64,
}

impl OracleInit {
    pub fn new(k: f64, r: f64, theta: f64) -> Self {
        OracleInit {
            k,
            r,
            theta,
            coin: [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            realization: Realization::Ladder,
            cutoff: None,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }

    pub fn coin(mut self, coin: [C64; 2]) -> Self {
        self.coin = coin;
        self
    }

    pub fn realization(mut self, realization: Realization) -> Self {
        self.realization = realization;
        self
    }

    pub fn cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    fn resolve(&self) -> Result<(SU11Params, usize)> {
        let params = SU11Params::new(self.k, self.r, self.theta)?;
        self.realization.check(self.k)?;
        validate_coin_state(self.coin)?;
        let needed = required_cutoff(self.k, self.r, self.tail_tolerance)?;
        let cutoff = self.cutoff.unwrap_or(needed);
        Ok((params, cutoff))
    }
}

fn tensor(coeffs: &LadderCoefficients, coin: [C64; 2]) -> Vec<[C64; 2]> {
    coeffs
        .coefficients
        .iter()
        .map(|&c| [c * coin[0], c * coin[1]])
        .collect()
}

/// `|k, ζ⟩ ⊗ coin` from the closed-form disk expansion.
pub fn oracle_init(init: &OracleInit) -> Result<OracleState> {
    let (params, cutoff) = init.resolve()?;
    let coeffs = crate::su11::disk_coefficients_checked(&params, cutoff, init.tail_tolerance)?;
    Ok(OracleState {
        k: init.k,
        r: init.r,
        cutoff,
        tail_bound: coeffs.tail_bound,
        psi: tensor(&coeffs, init.coin),
        realization: init.realization,
        step_count: 0,
    })
}

/// `|k, ζ⟩ ⊗ coin` by exponentiating `ζ* K₊ − ζ K₋` on a ladder padded to
/// twice the working cutoff, then keeping the first `cutoff + 1` levels.
pub fn oracle_init_by_exponential(init: &OracleInit) -> Result<OracleState> {
    let (params, cutoff) = init.resolve()?;
    let padded = 2 * cutoff + 16;
    let ops = LadderOperators::new(init.k, padded);
    let u = expm(&ops.displacement_generator(params.zeta()));
    let coeffs = LadderCoefficients {
        k: init.k,
        cutoff,
        coefficients: (0..=cutoff).map(|m| u[(m, 0)]).collect(),
        tail_bound: crate::su11::ladder_tail_bound(init.k, init.r, cutoff)?,
    };
    Ok(OracleState {
        k: init.k,
        r: init.r,
        cutoff,
        tail_bound: coeffs.tail_bound,
        psi: tensor(&coeffs, init.coin),
        realization: init.realization,
        step_count: 0,
    })
}

/// Largest component-wise difference between the two construction routes.
pub fn init_self_test(init: &OracleInit) -> Result<f64> {
    let a = oracle_init(init)?;
    let b = oracle_init_by_exponential(init)?;
    Ok(a.psi
        .iter()
        .zip(&b.psi)
        .map(|(x, y)| (x[0] - y[0]).norm().max((x[1] - y[1]).norm()))
        .fold(0.0, f64::max))
}

impl OracleState {
    pub fn norm_sqr(&self) -> f64 {
        self.psi
            .iter()
            .map(|p| p[0].norm_sqr() + p[1].norm_sqr())
            .sum()
    }

    /// Coin flip, then `e^{∓i·dθ·(k+m)}` on the `↑`/`↓` components.
    pub fn step(&self, coin: &CoinOperator, dtheta: f64) -> OracleState {
        let psi = self
            .psi
            .iter()
            .enumerate()
            .map(|(m, &p)| {
                let [u, d] = coin.apply(p);
                let phase = C64::from_polar(1.0, -dtheta * (self.k + m as f64));
                [u * phase, d * phase.conj()]
            })
            .collect();
        OracleState {
            psi,
            step_count: self.step_count + 1,
            ..self.clone()
        }
    }

    /// Coin reduced density matrix `ρ[s][s'] = Σ_m ψ_{m,s} ψ*_{m,s'}`.
    pub fn coin_density(&self) -> [[C64; 2]; 2] {
        let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
        for p in &self.psi {
            for i in 0..2 {
                for j in 0..2 {
                    rho[i][j] += p[i] * p[j].conj();
                }
            }
        }
        rho
    }

    /// Walker weight on the top tenth of the ladder (at least one level).
    pub fn edge_weight(&self) -> f64 {
        let band = (self.cutoff / 10).max(1);
        self.psi[self.psi.len().saturating_sub(band)..]
            .iter()
            .map(|p| p[0].norm_sqr() + p[1].norm_sqr())
            .sum()
    }
}

pub fn oracle_step(s: &OracleState, coin: &CoinOperator, dtheta: f64) -> OracleState {
    s.step(coin, dtheta)
}

/// Ladder expansions of the `L` site states `|k, r e^{iθ_n}⟩`, by storage
/// index `n + ⌊L/2⌋`.
#[derive(Debug, Clone)]
pub struct SiteExpansions {
    sites: Vec<LadderCoefficients>,
}

impl SiteExpansions {
    pub fn new(k: f64, r: f64, sites: usize, cutoff: usize) -> Result<Self> {
        let offset = (sites / 2) as i64;
        let sites = (0..sites)
            .map(|i| {
                let n = i as i64 - offset;
                let theta = 2.0 * PI * n as f64 / sites as f64;
                SU11Params::new(k, r, theta).map(|p| disk_coefficients(&p, cutoff))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SiteExpansions { sites })
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleObservables {
    pub probabilities: ProbabilityDistribution,
    pub bloch: BlochVector,
    /// Entropy from the eigenvalues of the coin reduced density matrix.
    pub entropy: f64,
    pub coin_spectrum: [f64; 2],
    pub k_triple: HyperboloidPoint,
    pub norm: f64,
    pub edge_weight: f64,
    /// Set when `edge_weight` exceeds 1e−10.
    pub truncation_warning: bool,
}

pub fn oracle_observables(s: &OracleState, sites: &SiteExpansions) -> Result<OracleObservables> {
    let raw: Vec<f64> = sites
        .sites
        .iter()
        .map(|site| {
            let (mut up, mut down) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
            for (c, p) in site.coefficients.iter().zip(&s.psi) {
                up += c.conj() * p[0];
                down += c.conj() * p[1];
            }
            up.norm_sqr() + down.norm_sqr()
        })
        .collect();
    let normalizer: f64 = raw.iter().sum();
    if !(normalizer > 0.0) {
        return Err(Error::ZeroNormalizer);
    }
    let probabilities = ProbabilityDistribution {
        p: raw.iter().map(|x| x / normalizer).collect(),
        raw,
        normalizer,
    };

    let rho = s.coin_density();
    let trace = (rho[0][0] + rho[1][1]).re;
    let bloch = BlochVector {
        mx: 2.0 * rho[0][1].re / trace,
        my: -2.0 * rho[0][1].im / trace,
        mz: (rho[0][0] - rho[1][1]).re / trace,
    };
    let gap = ((rho[0][0] - rho[1][1]).re.powi(2) + 4.0 * rho[0][1].norm_sqr()).sqrt();
    let hi = (0.5 * (trace + gap) / trace).min(1.0);
    let coin_spectrum = [hi, 1.0 - hi];

    let ops = LadderOperators::new(s.k, s.cutoff);
    let mut k_triple = HyperboloidPoint {
        k1: 0.0,
        k2: 0.0,
        k0: 0.0,
    };
    for branch in 0..2 {
        let v: Vec<C64> = s.psi.iter().map(|p| p[branch]).collect();
        let m = ops.moments(&v);
        k_triple.k1 += m.k1 / trace;
        k_triple.k2 += m.k2 / trace;
        k_triple.k0 += m.k0 / trace;
    }

    let edge_weight = s.edge_weight();
    Ok(OracleObservables {
        probabilities,
        bloch,
        entropy: binary_entropy(hi),
        coin_spectrum,
        k_triple,
        norm: trace.sqrt(),
        edge_weight,
        truncation_warning: edge_weight > 1e-10,
    })
}

/// Photon-number distribution of the walker, summed over the coin.
#[derive(Debug, Clone, PartialEq)]
pub enum PhotonStatistics {
    /// Weight by single-mode photon number `n`.
    OneMode(Vec<f64>),
    /// `((n_a, n_b), weight)` for every ladder level.
    TwoMode(Vec<((u64, u64), f64)>),
}

pub fn photon_statistics(s: &OracleState) -> Result<PhotonStatistics> {
    let weights = s.psi.iter().map(|p| p[0].norm_sqr() + p[1].norm_sqr());
    match s.realization {
        Realization::Ladder => Err(Error::Realization(
            "photon statistics need a one-mode or two-mode realization",
        )),
        Realization::OneMode => {
            let top = map_one_mode(s.k, s.cutoff as u64)? as usize;
            let mut hist = vec![0.0; top + 1];
            for (m, w) in weights.enumerate() {
                hist[map_one_mode(s.k, m as u64)? as usize] += w;
            }
            Ok(PhotonStatistics::OneMode(hist))
        }
        Realization::TwoMode => {
            let offset = two_mode_offset(s.k)?;
            Ok(PhotonStatistics::TwoMode(
                weights
                    .enumerate()
                    .map(|(m, w)| ((m as u64 + offset, m as u64), w))
                    .collect(),
            ))
        }
    }
}

/// Engine-versus-oracle comparison settings. Restricted to desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckConfig {
    pub k: f64,
    pub r: f64,
    pub sites: usize,
    pub steps: usize,
    #[serde(default)]
    pub phase_mode: PhaseMode,
    #[serde(default = "default_coin")]
    pub coin: [[f64; 2]; 2],
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_coin() -> [[f64; 2]; 2] {
    [[1.0, 0.0], [0.0, 0.0]]
}

fn default_tolerance() -> f64 {
    1e-8
}

impl CrossCheckConfig {
    pub fn new(k: f64, r: f64, sites: usize, steps: usize, phase_mode: PhaseMode) -> Self {
        CrossCheckConfig {
            k,
            r,
            sites,
            steps,
            phase_mode,
            coin: default_coin(),
            tolerance: default_tolerance(),
        }
    }

    pub fn coin_state(&self) -> [C64; 2] {
        [
            C64::new(self.coin[0][0], self.coin[0][1]),
            C64::new(self.coin[1][0], self.coin[1][1]),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        SU11Params::new(self.k, self.r, 0.0)?;
        let limits: [(&'static str, f64, bool); 4] = [
            ("sites", self.sites as f64, (2..=64).contains(&self.sites)),
            ("steps", self.steps as f64, self.steps <= 20),
            ("r", self.r, self.r <= 1.5),
            ("tolerance", self.tolerance, self.tolerance > 0.0),
        ];
        for (name, value, ok) in limits {
            if !ok {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "outside cross-check bounds (2 ≤ L ≤ 64, steps ≤ 20, r ≤ 1.5)",
                });
            }
        }
        validate_coin_state(self.coin_state())?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Probabilities,
    BlochVector,
    Entropy,
    EngineNorm,
    OracleNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    pub quantity: Quantity,
    pub step: usize,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub config: CrossCheckConfig,
    pub cutoff: usize,
    pub max_probability_deviation: f64,
    pub max_bloch_deviation: f64,
    pub max_entropy_deviation: f64,
    pub max_engine_norm_deviation: f64,
    pub max_oracle_norm_deviation: f64,
    pub first_divergence: Option<Divergence>,
    pub passed: bool,
    /// Paper-idealized runs drop the branch phases the oracle keeps, so a
    /// mismatch there is the documented outcome rather than a failure.
    pub expected_divergence: bool,
}

/// Norm deviation allowed for both engines.
const NORM_TOLERANCE: f64 = 1e-10;

/// Runs the coherent-frame engine and the ladder oracle side by side.
pub fn cross_check(cfg: &CrossCheckConfig) -> Result<CrossCheckReport> {
    cfg.validate()?;
    let frame = Frame::su11(cfg.k, cfg.r)?;
    let engine = walk::run(&WalkConfig {
        sites: cfg.sites,
        start: 0,
        coin_state: cfg.coin_state(),
        coin: CoinOperator::hadamard(),
        frame,
        phase_mode: cfg.phase_mode,
        steps: cfg.steps,
    })?;

    let mut state = oracle_init(&OracleInit::new(cfg.k, cfg.r, 0.0).coin(cfg.coin_state()))?;
    let sites = SiteExpansions::new(cfg.k, cfg.r, cfg.sites, state.cutoff)?;
    let dtheta = 2.0 * PI / cfg.sites as f64;
    let coin = CoinOperator::hadamard();

    let mut report = CrossCheckReport {
        config: *cfg,
        cutoff: state.cutoff,
        max_probability_deviation: 0.0,
        max_bloch_deviation: 0.0,
        max_entropy_deviation: 0.0,
        max_engine_norm_deviation: 0.0,
        max_oracle_norm_deviation: 0.0,
        first_divergence: None,
        passed: true,
        expected_divergence: cfg.phase_mode == PhaseMode::PaperIdealized,
    };

    for (l, eng) in engine.observables.iter().enumerate() {
        if l > 0 {
            state = state.step(&coin, dtheta);
        }
        let ora = oracle_observables(&state, &sites)?;
        let dp = eng
            .probabilities
            .p
            .iter()
            .zip(&ora.probabilities.p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let db = [
            eng.bloch.mx - ora.bloch.mx,
            eng.bloch.my - ora.bloch.my,
            eng.bloch.mz - ora.bloch.mz,
        ]
        .iter()
        .fold(0.0f64, |a, b| a.max(b.abs()));
        let ds = (eng.entropy - ora.entropy).abs();
        let dn_engine = (eng.norm - 1.0).abs();
        let dn_oracle = (ora.norm - 1.0).abs();

        report.max_probability_deviation = report.max_probability_deviation.max(dp);
        report.max_bloch_deviation = report.max_bloch_deviation.max(db);
        report.max_entropy_deviation = report.max_entropy_deviation.max(ds);
        report.max_engine_norm_deviation = report.max_engine_norm_deviation.max(dn_engine);
        report.max_oracle_norm_deviation = report.max_oracle_norm_deviation.max(dn_oracle);

        if report.first_divergence.is_none() {
            let checks = [
                (Quantity::Probabilities, dp, cfg.tolerance),
                (Quantity::BlochVector, db, cfg.tolerance),
                (Quantity::Entropy, ds, cfg.tolerance),
                (Quantity::EngineNorm, dn_engine, NORM_TOLERANCE),
                (Quantity::OracleNorm, dn_oracle, NORM_TOLERANCE),
            ];
            report.first_divergence = checks.iter().find(|(_, dev, tol)| !(dev < tol)).map(
                |&(quantity, deviation, _)| Divergence {
                    quantity,
                    step: l,
                    deviation,
                },
            );
        }
    }
    report.passed = report.first_divergence.is_none();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{bloch_vector, entanglement_entropy, probabilities, GramMatrix};
    use crate::su11::{hyperboloid_point, su11_overlap};
    use crate::walk::{hadamard, WalkState};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4};

    #[test]
    fn vacuum_start() {
        let s = oracle_init(&OracleInit::new(0.25, 0.0, 0.0)).unwrap();
        assert_eq!(s.psi[0], [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert_eq!(s.cutoff, 0);
    }

    #[test]
    fn mean_k0_is_k_cosh_2r() {
        let s = oracle_init(&OracleInit::new(0.25, 1.0, 0.0)).unwrap();
        let sites = SiteExpansions::new(0.25, 1.0, 8, s.cutoff).unwrap();
        let o = oracle_observables(&s, &sites).unwrap();
        assert_relative_eq!(o.k_triple.k0, 0.25 * 2f64.cosh(), epsilon = 1e-9);
        assert_relative_eq!(o.k_triple.k0, 0.940549, epsilon = 1e-6);
    }

    #[test]
    fn two_routes_to_the_coherent_state_agree() {
        for &(k, r, theta) in &[(0.25, 1.0, 0.0), (0.75, 0.5, 1.2), (10.0, 1.0, -2.0)] {
            let dev = init_self_test(&OracleInit::new(k, r, theta)).unwrap();
            assert!(dev < 1e-10, "k={k} r={r}: {dev:e}");
        }
    }

    #[test]
    fn oracle_inner_product_matches_closed_form() {
        let a = oracle_init(&OracleInit::new(10.0, 1.0, 0.0)).unwrap();
        let b = oracle_init(&OracleInit::new(10.0, 1.0, FRAC_PI_3)).unwrap();
        let ip: C64 = a
            .psi
            .iter()
            .zip(&b.psi)
            .map(|(x, y)| x[0].conj() * y[0])
            .sum();
        let closed = su11_overlap(10.0, 1.0, -FRAC_PI_3).unwrap();
        assert!((ip - closed).norm() < 1e-10);
    }

    #[test]
    fn initial_k_triple_is_hyperboloid_point() {
        for &(k, r, theta) in &[(0.5, 1.0, 0.0), (0.75, 0.8, 2.0), (3.0, 0.4, -1.0)] {
            let s = oracle_init(&OracleInit::new(k, r, theta)).unwrap();
            let sites = SiteExpansions::new(k, r, 4, s.cutoff).unwrap();
            let o = oracle_observables(&s, &sites).unwrap();
            let h = hyperboloid_point(&SU11Params::new(k, r, theta).unwrap());
            assert_relative_eq!(o.k_triple.k0, h.k0, max_relative = 1e-10);
            assert_relative_eq!(o.k_triple.k1, h.k1, epsilon = 1e-9);
            assert_relative_eq!(o.k_triple.k2, h.k2, epsilon = 1e-9);
            assert_eq!(o.entropy, 0.0);
        }
    }

    #[test]
    fn shifted_coherent_state_circles_the_hyperboloid() {
        let (k, r) = (0.75, 0.7);
        let mut s = oracle_init(&OracleInit::new(k, r, 0.0)).unwrap();
        let sites = SiteExpansions::new(k, r, 4, s.cutoff).unwrap();
        let coin = CoinOperator::identity();
        let radius = k * (2.0 * r).sinh();
        for _ in 0..12 {
            s = s.step(&coin, 0.3);
            let t = oracle_observables(&s, &sites).unwrap().k_triple;
            assert_relative_eq!(t.k1.hypot(t.k2), radius, max_relative = 1e-10);
            assert_relative_eq!(t.k0, k * (2.0 * r).cosh(), max_relative = 1e-10);
        }
    }

    #[test]
    fn one_step_matches_branch_phase_decomposition() {
        let (k, r) = (0.25, 1.0);
        let dtheta = FRAC_PI_4;
        let s0 = oracle_init(&OracleInit::new(k, r, 0.0)).unwrap();
        let s1 = s0.step(&hadamard(), dtheta);
        let plus = disk_coefficients(&SU11Params::new(k, r, dtheta).unwrap(), s0.cutoff);
        let minus = disk_coefficients(&SU11Params::new(k, r, -dtheta).unwrap(), s0.cutoff);
        let up_phase = C64::from_polar(FRAC_1_SQRT_2, -dtheta * k);
        for (m, p) in s1.psi.iter().enumerate() {
            let eu = plus.coefficients[m] * up_phase;
            let ed = minus.coefficients[m] * up_phase.conj();
            assert!((p[0] - eu).norm() < 1e-10 && (p[1] - ed).norm() < 1e-10);
        }
    }

    #[test]
    fn evolution_preserves_norm() {
        let mut s = oracle_init(&OracleInit::new(0.75, 1.0, 0.0)).unwrap();
        let n0 = s.norm_sqr();
        assert!((n0 - 1.0).abs() <= s.tail_bound + 1e-15);
        s = s.step(&CoinOperator::identity(), 0.0);
        assert_relative_eq!(s.norm_sqr(), n0, epsilon = 1e-15);
        for _ in 0..40 {
            s = s.step(&hadamard(), 2.0 * PI / 16.0);
        }
        assert!((s.norm_sqr() - n0).abs() < 1e-12);
    }

    #[test]
    fn matches_engine_in_physical_mode() {
        let (k, r, l) = (0.25, 0.5, 16);
        let frame = Frame::su11(k, r).unwrap();
        let g = GramMatrix::new(&frame, l).unwrap();
        let mut e = WalkState::initial(
            l,
            0,
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            frame,
            PhaseMode::Physical,
        )
        .unwrap();
        let mut o = oracle_init(&OracleInit::new(k, r, 0.0)).unwrap();
        let sites = SiteExpansions::new(k, r, l, o.cutoff).unwrap();
        for _ in 0..10 {
            e = e.step(&hadamard());
            o = o.step(&hadamard(), 2.0 * PI / l as f64);
        }
        let pe = probabilities(&e, &g).unwrap();
        let oo = oracle_observables(&o, &sites).unwrap();
        for (a, b) in pe.p.iter().zip(&oo.probabilities.p) {
            assert!((a - b).abs() < 1e-8);
        }
        let se = entanglement_entropy(&bloch_vector(&e, &g).unwrap());
        assert!((se - oo.entropy).abs() < 1e-8);
        assert!(!oo.truncation_warning);
    }

    #[test]
    fn walker_spectrum_equals_coin_spectrum() {
        // Schmidt symmetry: the walker's reduced state, built in the ladder
        // basis, has the same nonzero spectrum as the coin's.
        let mut s = oracle_init(&OracleInit::new(0.75, 0.5, 0.0).cutoff(60)).unwrap();
        for _ in 0..6 {
            s = s.step(&hadamard(), 2.0 * PI / 12.0);
        }
        let dim = s.psi.len();
        let rho_w = nalgebra::DMatrix::from_fn(dim, dim, |m, n| {
            s.psi[m][0] * s.psi[n][0].conj() + s.psi[m][1] * s.psi[n][1].conj()
        });
        let mut eig: Vec<f64> = nalgebra::SymmetricEigen::new(rho_w)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        let sites = SiteExpansions::new(0.75, 0.5, 12, s.cutoff).unwrap();
        let o = oracle_observables(&s, &sites).unwrap();
        let tr = s.norm_sqr();
        assert_relative_eq!(eig[0] / tr, o.coin_spectrum[0], epsilon = 1e-10);
        assert_relative_eq!(eig[1] / tr, o.coin_spectrum[1], epsilon = 1e-10);
        assert!(eig[2].abs() < 1e-12);
    }

    #[test]
    fn one_mode_parity() {
        let s = oracle_init(&OracleInit::new(0.25, 1.0, 0.0).realization(Realization::OneMode))
            .unwrap();
        let PhotonStatistics::OneMode(hist) = photon_statistics(&s).unwrap() else {
            panic!("expected one-mode histogram");
        };
        assert!(hist.iter().skip(1).step_by(2).all(|&w| w == 0.0));
        assert_relative_eq!(hist[0], 1.0 / 1f64.cosh(), epsilon = 1e-14);
        assert_relative_eq!(hist[0], 0.64805, epsilon = 5e-6);

        let s = oracle_init(&OracleInit::new(0.75, 1.0, 0.0).realization(Realization::OneMode))
            .unwrap();
        let PhotonStatistics::OneMode(hist) = photon_statistics(&s).unwrap() else {
            panic!("expected one-mode histogram");
        };
        assert!(hist.iter().step_by(2).all(|&w| w == 0.0));
    }

    #[test]
    fn two_mode_support_is_offset_diagonal() {
        let s =
            oracle_init(&OracleInit::new(1.0, 0.8, 0.0).realization(Realization::TwoMode)).unwrap();
        let PhotonStatistics::TwoMode(support) = photon_statistics(&s).unwrap() else {
            panic!("expected two-mode support");
        };
        assert!(support.iter().all(|((na, nb), _)| *na == nb + 1));
    }

    #[test]
    fn realization_constraints() {
        let s = oracle_init(&OracleInit::new(0.25, 1.0, 0.0)).unwrap();
        assert!(matches!(photon_statistics(&s), Err(Error::Realization(_))));
        assert!(
            oracle_init(&OracleInit::new(0.5, 1.0, 0.0).realization(Realization::OneMode)).is_err()
        );
        assert!(
            oracle_init(&OracleInit::new(0.25, 1.0, 0.0).realization(Realization::TwoMode))
                .is_err()
        );
    }

    #[test]
    fn undersized_cutoff_is_a_truncation_error() {
        let err = oracle_init(&OracleInit::new(10.0, 1.0, 0.0).cutoff(20)).unwrap_err();
        assert!(matches!(err, Error::Truncation { required_cutoff, .. } if required_cutoff > 20));
    }

    #[test]
    fn cross_check_reports() {
        let ok = cross_check(&CrossCheckConfig::new(
            0.25,
            0.5,
            16,
            10,
            PhaseMode::Physical,
        ))
        .unwrap();
        assert!(ok.passed, "{ok:?}");
        assert!(ok.max_probability_deviation < 1e-8);

        let idealized = cross_check(&CrossCheckConfig::new(
            0.25,
            0.5,
            16,
            10,
            PhaseMode::PaperIdealized,
        ))
        .unwrap();
        assert!(!idealized.passed);
        assert!(idealized.expected_divergence);
        assert!(idealized.max_probability_deviation > 1e-3);
        assert!(idealized.first_divergence.is_some());

        assert!(cross_check(&CrossCheckConfig::new(
            0.25,
            2.0,
            16,
            10,
            PhaseMode::Physical
        ))
        .is_err());
        assert!(cross_check(&CrossCheckConfig::new(
            0.25,
            0.5,
            128,
            10,
            PhaseMode::Physical
        ))
        .is_err());
    }
}
