//! Browser bindings. Every export returns flat `f64` arrays so the page can
//! plot them without a serialization layer.

use std::f64::consts::FRAC_1_SQRT_2;

use su11_walk::{run, su11_overlap, CoinOperator, Frame, PhaseMode, WalkConfig, C64};
use wasm_bindgen::prelude::*;

fn js(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// `|⟨k, r e^{iθ}| k, r⟩|` on `points` samples of `[−π, π]`, as
/// interleaved `(θ, value)` pairs.
#[wasm_bindgen]
pub fn overlap_curve(k: f64, r: f64, points: usize) -> Result<Vec<f64>, JsError> {
    if points < 2 {
        return Err(js("points must be at least 2"));
    }
    let span = (points - 1) as f64;
    let mut out = Vec::with_capacity(2 * points);
    for j in 0..points {
        let theta = std::f64::consts::PI * (2.0 * j as f64 - span) / span;
        out.push(theta);
        out.push(su11_overlap(k, r, theta).map_err(js)?.norm());
    }
    Ok(out)
}

fn config(
    frame: &str,
    sites: usize,
    steps: usize,
    balanced: bool,
    idealized: bool,
) -> Result<WalkConfig, JsError> {
    // keeps a single call well under a frame budget in the browser
    if !(2..=512).contains(&sites) || steps > 400 {
        return Err(js("need 2 <= sites <= 512 and steps <= 400"));
    }
    let frame: Frame = frame.parse().map_err(js)?;
    frame.validate().map_err(js)?;
    let coin_state = if balanced {
        [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)]
    } else {
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    };
    Ok(WalkConfig {
        sites,
        start: 0,
        coin_state,
        coin: CoinOperator::hadamard(),
        frame,
        phase_mode: if idealized {
            PhaseMode::PaperIdealized
        } else {
            PhaseMode::Physical
        },
        steps,
    })
}

/// Site distribution after `steps` Hadamard steps, as interleaved
/// `(site, P_n)` pairs. `frame` is `ideal`, `hw:|α|` or `su11:k,r`.
#[wasm_bindgen]
pub fn walk_distribution(
    frame: &str,
    sites: usize,
    steps: usize,
    balanced: bool,
    idealized: bool,
) -> Result<Vec<f64>, JsError> {
    let traj = run(&config(frame, sites, steps, balanced, idealized)?).map_err(js)?;
    Ok(traj
        .last()
        .probabilities
        .iter()
        .flat_map(|(n, p)| [n as f64, p])
        .collect())
}

/// Coin entanglement entropy at every step `0..=steps`.
#[wasm_bindgen]
pub fn entropy_series(
    frame: &str,
    sites: usize,
    steps: usize,
    balanced: bool,
    idealized: bool,
) -> Result<Vec<f64>, JsError> {
    let traj = run(&config(frame, sites, steps, balanced, idealized)?).map_err(js)?;
    Ok(traj.observables.iter().map(|o| o.entropy).collect())
}
