//! Local reaction kinetics of the two-variable excitable membrane model.
//!
//! The membrane potential `v` carries an inward calcium current, an outward
//! rectifying potassium current gated by `n`, and a leak. Potassium gating is
//! written in terms of opening/closing rates `alpha`, `beta` so the activation
//! and deactivation processes can be tuned independently.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Full parameter record of the membrane model plus the diffusion
/// coefficient of `v`.
///
/// `g_ca`, `g_k`, `u3a..u4b` defaults follow the standard tabulated values;
/// the remaining constants (`e_ca`, `e_k`, `e_l`, `g_l`, `u1`, `u2`, `d_v`)
/// are externally sourced and were calibrated against the refractory-bump
/// experiment (see README).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Max calcium conductance (mS/cm^2).
    #[serde(rename = "gCa")]
    pub g_ca: f64,
    /// Max potassium conductance (mS/cm^2).
    #[serde(rename = "gK")]
    pub g_k: f64,
    /// Leak conductance (mS/cm^2).
    #[serde(rename = "gL")]
    pub g_l: f64,
    /// Calcium reversal potential (mV).
    #[serde(rename = "eCa")]
    pub e_ca: f64,
    /// Potassium reversal potential (mV).
    #[serde(rename = "eK")]
    pub e_k: f64,
    /// Leak reversal potential (mV).
    #[serde(rename = "eL")]
    pub e_l: f64,
    /// Shift of the fast activation sigmoid (mV).
    pub u1: f64,
    /// Scale of the fast activation sigmoid (mV).
    pub u2: f64,
    /// Potassium activation rate shift (mV).
    pub u3a: f64,
    /// Potassium activation rate scale (mV).
    pub u4a: f64,
    /// Potassium deactivation rate shift (mV).
    pub u3b: f64,
    /// Potassium deactivation rate scale (mV).
    pub u4b: f64,
    /// Excitability parameter multiplying the gating dynamics.
    pub eps: f64,
    /// Diffusion coefficient of `v` (space^2/time).
    #[serde(rename = "dV")]
    pub d_v: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            g_ca: 4.4,
            g_k: 8.0,
            g_l: 2.0,
            e_ca: 120.0,
            e_k: -84.0,
            e_l: -60.0,
            u1: -8.0,
            u2: 18.0,
            u3a: 2.0,
            u4a: 10.0,
            u3b: 2.0,
            u4b: 10.0,
            eps: 0.2,
            d_v: 1.15e-3,
        }
    }
}

impl ModelParams {
    /// Checks the positivity constraints on conductances, rate scales,
    /// excitability and diffusion.
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.g_ca, "gCa"),
            (self.g_k, "gK"),
            (self.g_l, "gL"),
            (self.u2, "u2"),
            (self.u4a, "u4a"),
            (self.u4b, "u4b"),
            (self.eps, "eps"),
            (self.d_v, "dV"),
        ];
        for (val, name) in checks {
            if !(val > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {val}"
                )));
            }
        }
        Ok(())
    }

    /// Returns a copy with one named parameter replaced. Names follow the
    /// config-file spelling (`gCa`, `u3a`, ...).
    pub fn with_named(&self, name: &str, value: f64) -> Result<ModelParams> {
        let mut p = *self;
        match name {
            "gCa" => p.g_ca = value,
            "gK" => p.g_k = value,
            "gL" => p.g_l = value,
            "eCa" => p.e_ca = value,
            "eK" => p.e_k = value,
            "eL" => p.e_l = value,
            "u1" => p.u1 = value,
            "u2" => p.u2 = value,
            "u3a" => p.u3a = value,
            "u4a" => p.u4a = value,
            "u3b" => p.u3b = value,
            "u4b" => p.u4b = value,
            "eps" => p.eps = value,
            "dV" => p.d_v = value,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown parameter name {name}"
                )))
            }
        }
        Ok(p)
    }

    /// Reads a named parameter by its config-file spelling.
    pub fn named(&self, name: &str) -> Result<f64> {
        Ok(match name {
            "gCa" => self.g_ca,
            "gK" => self.g_k,
            "gL" => self.g_l,
            "eCa" => self.e_ca,
            "eK" => self.e_k,
            "eL" => self.e_l,
            "u1" => self.u1,
            "u2" => self.u2,
            "u3a" => self.u3a,
            "u4a" => self.u4a,
            "u3b" => self.u3b,
            "u4b" => self.u4b,
            "eps" => self.eps,
            "dV" => self.d_v,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown parameter name {name}"
                )))
            }
        })
    }
}

/// Point state of the local dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    /// Membrane potential (mV).
    pub v: f64,
    /// Potassium gating variable.
    pub n: f64,
}

/// Excitability classification of the local dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExcitabilityClass {
    /// Three equilibria; `score` is the Euclidean distance between the two
    /// depolarized equilibria.
    TypeI { score: f64 },
    /// Single equilibrium; `score` is minus the minimum vertical nullcline
    /// separation over v in [-30, 0].
    TypeII { score: f64 },
}

impl ExcitabilityClass {
    /// Signed score: positive for type I, negative for type II.
    pub fn score(&self) -> f64 {
        match *self {
            ExcitabilityClass::TypeI { score } => score,
            ExcitabilityClass::TypeII { score } => score,
        }
    }

    pub fn is_type_i(&self) -> bool {
        matches!(self, ExcitabilityClass::TypeI { .. })
    }
}

// cosh overflows past ~710; rate arguments are capped well inside that
// range (|v| beyond a few thousand mV is a diverging Newton iterate anyway).
const RATE_ARG_CAP: f64 = 300.0;

fn cap(x: f64) -> f64 {
    x.clamp(-RATE_ARG_CAP, RATE_ARG_CAP)
}

/// Auxiliary rate functions at potential `v`:
/// `(m_inf, alpha, beta, n_inf, tau_n)`.
pub fn rates(v: f64, p: &ModelParams) -> (f64, f64, f64, f64, f64) {
    let m_inf = 0.5 * (1.0 + ((v - p.u1) / p.u2).tanh());
    let xa = cap((v - p.u3a) / (2.0 * p.u4a));
    let xb = cap((v - p.u3b) / (2.0 * p.u4b));
    let alpha = 0.5 * (xa.cosh() + xa.tanh() * xa.cosh());
    let beta = 0.5 * (1.0 - (2.0 * xb).tanh()) * xb.cosh();
    let n_inf = alpha / (alpha + beta);
    let tau_n = 1.0 / (alpha + beta);
    (m_inf, alpha, beta, n_inf, tau_n)
}

/// Local reaction terms `(f1, f2)` of the model.
pub fn reaction(s: State, p: &ModelParams) -> (f64, f64) {
    let (m_inf, alpha, beta, _, _) = rates(s.v, p);
    let f1 = -p.g_ca * m_inf * (s.v - p.e_ca) - p.g_k * s.n * (s.v - p.e_k)
        - p.g_l * (s.v - p.e_l);
    let f2 = p.eps * (alpha * (1.0 - s.n) - beta * s.n);
    (f1, f2)
}

/// Exact Jacobian of `reaction` with respect to `(v, n)`, row-major
/// `[df1/dv, df1/dn, df2/dv, df2/dn]`.
pub fn jacobian(s: State, p: &ModelParams) -> [f64; 4] {
    let (m_inf, alpha, beta, _, _) = rates(s.v, p);
    let ya = (s.v - p.u1) / p.u2;
    let dm_inf = 0.5 / (ya.cosh() * ya.cosh()) / p.u2;
    let xa = cap((s.v - p.u3a) / (2.0 * p.u4a));
    let xb = cap((s.v - p.u3b) / (2.0 * p.u4b));
    // alpha = 0.5 (1 + tanh xa) cosh xa
    let dalpha = (1.0 / xa.cosh() + (1.0 + xa.tanh()) * xa.sinh()) / (4.0 * p.u4a);
    // beta = 0.5 (1 - tanh 2xb) cosh xb
    let sech2 = 1.0 / ((2.0 * xb).cosh() * (2.0 * xb).cosh());
    let dbeta = (-2.0 * xb.cosh() * sech2 + (1.0 - (2.0 * xb).tanh()) * xb.sinh())
        / (4.0 * p.u4b);
    let j11 = -p.g_ca * (dm_inf * (s.v - p.e_ca) + m_inf) - p.g_k * s.n - p.g_l;
    let j12 = -p.g_k * (s.v - p.e_k);
    let j21 = p.eps * (dalpha * (1.0 - s.n) - dbeta * s.n);
    let j22 = -p.eps * (alpha + beta);
    [j11, j12, j21, j22]
}

/// `n` value of the v-nullcline (`f1 = 0` solved for `n`) at potential `v`.
pub fn v_nullcline(v: f64, p: &ModelParams) -> f64 {
    let (m_inf, _, _, _, _) = rates(v, p);
    (-p.g_ca * m_inf * (v - p.e_ca) - p.g_l * (v - p.e_l)) / (p.g_k * (v - p.e_k))
}

const EQ_SCAN_LO: f64 = -80.0;
const EQ_SCAN_HI: f64 = 60.0;
const EQ_SCAN_POINTS: usize = 2000;

/// All equilibria of the local dynamics, sorted by increasing `v`.
///
/// Roots of `f1(v, n_inf(v))` are bracketed on a dense scan of
/// `[-80, 60]` and polished by Newton with bisection fallback.
pub fn equilibria(p: &ModelParams) -> Result<Vec<State>> {
    let h_of = |v: f64| {
        let (_, _, _, n_inf, _) = rates(v, p);
        reaction(State { v, n: n_inf }, p).0
    };
    let dh_of = |v: f64| {
        let (_, alpha, beta, n_inf, _) = rates(v, p);
        let j = jacobian(State { v, n: n_inf }, p);
        // d n_inf / dv from the quotient rule on alpha/(alpha+beta)
        let e = 1e-6;
        let (_, a2, b2, _, _) = rates(v + e, p);
        let (_, a1, b1, _, _) = rates(v - e, p);
        let dn_inf = (a2 / (a2 + b2) - a1 / (a1 + b1)) / (2.0 * e);
        let _ = (alpha, beta, n_inf);
        j[0] + j[1] * dn_inf
    };

    let mut roots: Vec<f64> = Vec::new();
    let step = (EQ_SCAN_HI - EQ_SCAN_LO) / (EQ_SCAN_POINTS - 1) as f64;
    let mut v_prev = EQ_SCAN_LO;
    let mut h_prev = h_of(v_prev);
    for i in 1..EQ_SCAN_POINTS {
        let v = EQ_SCAN_LO + i as f64 * step;
        let h = h_of(v);
        if h_prev == 0.0 {
            roots.push(v_prev);
        } else if h_prev * h < 0.0 {
            // Newton polish from the midpoint, bisection as safety net
            let (mut a, mut b) = (v_prev, v);
            let (mut ha, _) = (h_prev, h);
            let mut x = 0.5 * (a + b);
            let mut converged = false;
            for _ in 0..100 {
                let hx = h_of(x);
                if hx.abs() < 1e-13 {
                    converged = true;
                    break;
                }
                if ha * hx < 0.0 {
                    b = x;
                } else {
                    a = x;
                    ha = hx;
                }
                let dx = hx / dh_of(x);
                let xn = x - dx;
                x = if xn > a && xn < b { xn } else { 0.5 * (a + b) };
            }
            if !converged {
                return Err(Error::Convergence(format!(
                    "equilibrium polish stalled near v = {x}"
                )));
            }
            roots.push(x);
        }
        v_prev = v;
        h_prev = h;
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
    Ok(roots
        .into_iter()
        .map(|v| {
            let (_, _, _, n_inf, _) = rates(v, p);
            State { v, n: n_inf }
        })
        .collect())
}

/// Rest state: the lowest-potential equilibrium.
pub fn rest_state(p: &ModelParams) -> Result<State> {
    let eq = equilibria(p)?;
    eq.first().copied().ok_or_else(|| {
        Error::Convergence("no equilibrium found in scan window".into())
    })
}

/// Type I / type II classification with the signed distance score.
pub fn classify(p: &ModelParams) -> Result<ExcitabilityClass> {
    let eq = equilibria(p)?;
    if eq.len() >= 3 {
        let b = eq[eq.len() - 2];
        let c = eq[eq.len() - 1];
        let score = ((b.v - c.v).powi(2) + (b.n - c.n).powi(2)).sqrt();
        Ok(ExcitabilityClass::TypeI { score })
    } else {
        // vertical nullcline gap over v in [-30, 0]
        let m = 600;
        let mut min_gap = f64::INFINITY;
        for i in 0..=m {
            let v = -30.0 + 30.0 * i as f64 / m as f64;
            let (_, _, _, n_inf, _) = rates(v, p);
            let gap = (v_nullcline(v, p) - n_inf).abs();
            if gap < min_gap {
                min_gap = gap;
            }
        }
        Ok(ExcitabilityClass::TypeII { score: -min_gap })
    }
}
