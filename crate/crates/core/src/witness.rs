//! Correlation witnesses, the quantum trade-off curve, sharpness
//! certification from witness values alone, and the exact classical frontier.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qubit::{dot3, norm3, scale3, sub3, Vec3};
use crate::scenario::{bit, JointTable, Strategy, N_PREP, N_SETTING};

pub const SQRT3: f64 = 1.7320508075688772;

/// Largest Bob witness any qubit strategy reaches: (1 + 1/sqrt(3)) / 2.
pub fn ab_quantum_max() -> f64 {
    0.5 + SQRT3 / 6.0
}

/// Largest Charlie witness on the optimal trade-off curve, reached at eta = 0.
pub fn ac_quantum_max() -> f64 {
    0.5 + SQRT3 / 6.0
}

/// Charlie witness floor of the optimal curve, reached at eta = 1:
/// (1 + sqrt(3)/9) / 2.
pub fn ac_at_full_sharpness() -> f64 {
    0.5 + SQRT3 / 18.0
}

/// Classical one-bit bound for either witness: 3/4.
pub const CLASSICAL_BOUND: f64 = 0.75;

/// Bob's average decoding score: (1/24) sum_{x,y} p(b = x_y | x, y).
pub fn witness_ab(t: &JointTable) -> f64 {
    let mut total = 0.0;
    for x in 0..N_PREP {
        for y in 0..N_SETTING {
            total += t.bob[x][y][bit(x, y) as usize];
        }
    }
    total / 24.0
}

/// Charlie's average decoding score: (1/24) sum_{x,z} p(c = x_z | x, z).
pub fn witness_ac(t: &JointTable) -> f64 {
    let mut total = 0.0;
    for x in 0..N_PREP {
        for z in 0..N_SETTING {
            total += t.charlie[x][z][bit(x, z) as usize];
        }
    }
    total / 24.0
}

fn check_range(what: &'static str, v: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if v < lo - tol || v > hi + tol {
        return Err(Error::Domain {
            what,
            value: v,
            lo,
            hi,
        });
    }
    Ok(v.clamp(lo, hi))
}

/// Bob witness of the optimal family at sharpness eta: 1/2 + sqrt(3) eta / 6.
pub fn ab_from_eta(eta: f64) -> Result<f64> {
    let eta = check_range("eta", eta, 0.0, 1.0, 1e-9)?;
    Ok(0.5 + SQRT3 * eta / 6.0)
}

/// Charlie witness of the optimal family at sharpness eta:
/// 1/2 + sqrt(3)/18 (1 + 2 sqrt(1 - eta^2)).
pub fn ac_from_eta(eta: f64) -> Result<f64> {
    let eta = check_range("eta", eta, 0.0, 1.0, 1e-9)?;
    let rad = (1.0 - eta * eta).max(0.0);
    Ok(0.5 + SQRT3 / 18.0 * (1.0 + 2.0 * rad.sqrt()))
}

/// Largest Charlie witness compatible with a given Bob witness:
/// 1/2 + sqrt(3)/18 (1 + 2 sqrt(12 a - 12 a^2 - 2)).
///
/// Defined for a in [1/2, (1 + 1/sqrt(3))/2]; radicand dust down to -1e-12 is
/// clamped to zero.
pub fn tradeoff_bound(a_ab: f64) -> Result<f64> {
    let a = check_range("a_ab", a_ab, 0.5, ab_quantum_max(), 1e-9)?;
    let rad = 12.0 * a - 12.0 * a * a - 2.0;
    if rad < -1e-12 {
        return Err(Error::Domain {
            what: "tradeoff radicand",
            value: rad,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(0.5 + SQRT3 / 18.0 * (1.0 + 2.0 * rad.max(0.0).sqrt()))
}

/// Certified lower bound on Bob's sharpness from his witness alone:
/// eta >= sqrt(3) (2 a_ab - 1), clamped to [0, 1].
///
/// The flag is true when the bound is nontrivial (a_ab > 1/2).
pub fn eta_lower(a_ab: f64) -> Result<(f64, bool)> {
    let a = check_range("a_ab", a_ab, 0.0, 1.0, 1e-9)?;
    let raw = SQRT3 * (2.0 * a - 1.0);
    Ok((raw.clamp(0.0, 1.0), a > 0.5))
}

/// Certified upper bound on Bob's sharpness from Charlie's witness alone:
/// eta <= (1/2) sqrt(3 (6 sqrt(3) a - 3 sqrt(3) + 1) (-2 sqrt(3) a + sqrt(3) + 1)).
///
/// Nontrivial only for a_ac inside [(1 + sqrt(3)/9)/2, (1 + sqrt(3)/3)/2];
/// outside that window the statement is vacuous and (1.0, false) is returned.
pub fn eta_upper(a_ac: f64) -> Result<(f64, bool)> {
    let a = check_range("a_ac", a_ac, 0.0, 1.0, 1e-9)?;
    let lo_w = ac_at_full_sharpness();
    let hi_w = ac_quantum_max();
    if a < lo_w - 1e-12 || a > hi_w + 1e-12 {
        return Ok((1.0, false));
    }
    let rad = 3.0 * (6.0 * SQRT3 * a - 3.0 * SQRT3 + 1.0) * (-2.0 * SQRT3 * a + SQRT3 + 1.0);
    Ok(((0.5 * rad.max(0.0).sqrt()).clamp(0.0, 1.0), true))
}

/// Two-sided sharpness certificate from a witness pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub eta_lo: f64,
    pub eta_hi: f64,
    pub lower_nontrivial: bool,
    pub upper_nontrivial: bool,
}

/// Combine both one-sided bounds. Pairs whose lower bound exceeds the upper
/// bound by more than 1e-6 are rejected as inconsistent.
pub fn certify(a_ab: f64, a_ac: f64) -> Result<Certificate> {
    let (lo, lower_nontrivial) = eta_lower(a_ab)?;
    let (hi, upper_nontrivial) = eta_upper(a_ac)?;
    if lo > hi + 1e-6 {
        return Err(Error::InconsistentPair {
            a_ab,
            a_ac,
            lo,
            hi,
        });
    }
    Ok(Certificate {
        eta_lo: lo.min(hi),
        eta_hi: hi,
        lower_nontrivial,
        upper_nontrivial,
    })
}

// ---------------------------------------------------------------------------
// exact classical frontier

const KAB_MAX: usize = 24;
const KAC_MAX: usize = 72;

/// Exactly enumerated set of witness pairs reachable with one classical bit.
///
/// Scores are stored as integer counts: Bob's out of 24, Charlie's out of 72.
/// Strategies are deterministic; shared randomness fills the convex hull but
/// cannot move the frontier outward.
pub struct ClassicalFrontier {
    achievable: Vec<[bool; KAC_MAX + 1]>,
    /// Pareto-optimal (a_ab, a_ac) pairs, ascending in a_ab.
    pub pareto: Vec<(f64, f64)>,
    pub max_ab: f64,
    pub max_ac: f64,
    /// Whether one strategy reaches 3/4 on both witnesses at once.
    pub joint_bound_achievable: bool,
}

impl ClassicalFrontier {
    pub fn contains_counts(&self, k_ab: usize, k_ac: usize) -> bool {
        k_ab <= KAB_MAX && k_ac <= KAC_MAX && self.achievable[k_ab][k_ac]
    }

    /// Largest Charlie witness achievable with Bob at or above `a_ab`, or
    /// None when no deterministic strategy reaches that Bob score.
    pub fn best_ac_given_ab(&self, a_ab: f64) -> Option<f64> {
        let k_min = ((a_ab * KAB_MAX as f64) - 1e-9).ceil().max(0.0) as usize;
        let mut best: Option<usize> = None;
        for k_ab in k_min..=KAB_MAX {
            for k_ac in (0..=KAC_MAX).rev() {
                if self.achievable[k_ab][k_ac] {
                    best = Some(best.map_or(k_ac, |b: usize| b.max(k_ac)));
                    break;
                }
            }
        }
        best.map(|k| k as f64 / KAC_MAX as f64)
    }
}

/// Enumerate all deterministic one-bit strategies.
///
/// An encoding maps each x to one bit; Bob's decoding and relay are functions
/// of (message, y); Charlie's decoding is a function of (relayed bit, z). For
/// a fixed encoding the Bob score depends only on the decoding and the
/// Charlie score only on the relay and Charlie decoding, so the achievable
/// pairs per encoding form a product set.
pub fn classical_frontier() -> ClassicalFrontier {
    let per_encoding: Vec<([bool; KAB_MAX + 1], [bool; KAC_MAX + 1])> = (0..256usize)
        .into_par_iter()
        .map(|enc| {
            let msg: Vec<usize> = (0..N_PREP).map(|x| (enc >> x) & 1).collect();

            // Bob: decoding d(m, y) = bit y of the 6-bit table, slot m*3+y.
            let mut ab_set = [false; KAB_MAX + 1];
            for d in 0..64usize {
                let mut k_ab = 0usize;
                for x in 0..N_PREP {
                    for y in 0..N_SETTING {
                        let guess = (d >> (msg[x] * 3 + y)) & 1;
                        if guess as u8 == bit(x, y) {
                            k_ab += 1;
                        }
                    }
                }
                ab_set[k_ab] = true;
            }

            // Charlie: relay r(m, y) then decoding c(m', z).
            let mut ac_set = [false; KAC_MAX + 1];
            for r in 0..64usize {
                // n[m'][z][v]: how many (x, y) pairs relay m' while bit z of
                // x equals v.
                let mut n = [[[0u32; 2]; N_SETTING]; 2];
                for x in 0..N_PREP {
                    for y in 0..N_SETTING {
                        let m2 = (r >> (msg[x] * 3 + y)) & 1;
                        for z in 0..N_SETTING {
                            n[m2][z][bit(x, z) as usize] += 1;
                        }
                    }
                }
                for c in 0..64usize {
                    let mut k_ac = 0u32;
                    for m2 in 0..2 {
                        for z in 0..N_SETTING {
                            let guess = (c >> (m2 * 3 + z)) & 1;
                            k_ac += n[m2][z][guess];
                        }
                    }
                    ac_set[k_ac as usize] = true;
                }
            }
            (ab_set, ac_set)
        })
        .collect();

    let mut achievable = vec![[false; KAC_MAX + 1]; KAB_MAX + 1];
    let mut joint = false;
    for (ab_set, ac_set) in &per_encoding {
        if ab_set[18] && ac_set[54] {
            joint = true;
        }
        for (k_ab, &a_ok) in ab_set.iter().enumerate() {
            if !a_ok {
                continue;
            }
            for (k_ac, &c_ok) in ac_set.iter().enumerate() {
                if c_ok {
                    achievable[k_ab][k_ac] = true;
                }
            }
        }
    }

    let max_kab = (0..=KAB_MAX)
        .rev()
        .find(|&k| achievable[k].iter().any(|&v| v))
        .unwrap_or(0);
    let max_kac = (0..=KAC_MAX)
        .rev()
        .find(|&k| achievable.iter().any(|row| row[k]))
        .unwrap_or(0);

    // Pareto staircase: for each Bob count, the best Charlie count reachable
    // at or above it; keep the corners.
    let mut suffix_best = vec![0usize; KAB_MAX + 2];
    for k_ab in (0..=max_kab).rev() {
        let here = (0..=KAC_MAX).rev().find(|&k| achievable[k_ab][k]).unwrap_or(0);
        suffix_best[k_ab] = here.max(suffix_best[k_ab + 1]);
    }
    let mut pareto = Vec::new();
    for k_ab in 0..=max_kab {
        let c = suffix_best[k_ab];
        let is_corner = k_ab == max_kab || suffix_best[k_ab + 1] < c;
        if is_corner {
            pareto.push((k_ab as f64 / KAB_MAX as f64, c as f64 / KAC_MAX as f64));
        }
    }

    ClassicalFrontier {
        achievable,
        pareto,
        max_ab: max_kab as f64 / KAB_MAX as f64,
        max_ac: max_kac as f64 / KAC_MAX as f64,
        joint_bound_achievable: joint,
    }
}

// ---------------------------------------------------------------------------
// canonical-form recovery

/// Result of aligning a strategy with the coordinate-axis form.
#[derive(Clone, Debug, Serialize)]
pub struct CanonReport {
    pub pass: bool,
    /// Whether the strategy matched only after complex conjugation
    /// (bloch y-components flipped).
    pub conjugated: bool,
    /// Sharpness recovered from Bob's observables.
    pub eta: f64,
    pub prep_residuals: [f64; N_PREP],
    pub bob_residuals: [f64; N_SETTING],
    pub charlie_residuals: [f64; N_SETTING],
    pub max_residual: f64,
}

fn flip_y(v: Vec3) -> Vec3 {
    [v[0], -v[1], v[2]]
}

/// Gram-Schmidt on three rows; returns None when the input is too close to
/// degenerate to define a frame.
fn orthonormal_frame(d: [Vec3; 3]) -> Option<[Vec3; 3]> {
    let mut e = [[0.0; 3]; 3];
    let n0 = norm3(d[0]);
    if n0 < 1e-9 {
        return None;
    }
    e[0] = scale3(1.0 / n0, d[0]);
    let p1 = sub3(d[1], scale3(dot3(d[1], e[0]), e[0]));
    let n1 = norm3(p1);
    if n1 < 1e-9 {
        return None;
    }
    e[1] = scale3(1.0 / n1, p1);
    let p2 = sub3(
        sub3(d[2], scale3(dot3(d[2], e[0]), e[0])),
        scale3(dot3(d[2], e[1]), e[1]),
    );
    let n2 = norm3(p2);
    if n2 < 1e-9 {
        return None;
    }
    e[2] = scale3(1.0 / n2, p2);
    Some(e)
}

fn frame_det(e: &[Vec3; 3]) -> f64 {
    dot3(e[0], crate::qubit::cross3(e[1], e[2]))
}

/// Decide whether a strategy is the optimal family in disguise: recover the
/// global rotation from Bob's observable axes (falling back to the complex
/// conjugate branch when they form a left-handed frame), then report how far
/// every component sits from its canonical position.
pub fn canonicalize(s: &Strategy, tol: f64) -> Result<CanonReport> {
    s.validate()?;
    let mut preps: Vec<Vec3> = s.preparations.to_vec();
    let mut t_axes: Vec<Vec3> = s.instruments.iter().map(|i| i.t).collect();
    let mut m_axes: Vec<Vec3> = s.measurements.iter().map(|m| m.m).collect();

    let eta_each: Vec<f64> = t_axes.iter().map(|t| norm3(*t)).collect();
    let eta = eta_each.iter().sum::<f64>() / 3.0;

    let fail_all = |eta: f64| CanonReport {
        pass: false,
        conjugated: false,
        eta,
        prep_residuals: [f64::INFINITY; N_PREP],
        bob_residuals: [f64::INFINITY; N_SETTING],
        charlie_residuals: [f64::INFINITY; N_SETTING],
        max_residual: f64::INFINITY,
    };

    let dirs = |ts: &[Vec3]| -> Option<[Vec3; 3]> {
        let mut d = [[0.0; 3]; 3];
        for (i, t) in ts.iter().enumerate() {
            let n = norm3(*t);
            if n < 1e-9 {
                return None;
            }
            d[i] = scale3(1.0 / n, *t);
        }
        Some(d)
    };

    let d = match dirs(&t_axes) {
        Some(d) => d,
        None => return Ok(fail_all(eta)),
    };
    let mut frame = match orthonormal_frame(d) {
        Some(f) => f,
        None => return Ok(fail_all(eta)),
    };

    let mut conjugated = false;
    if frame_det(&frame) < 0.0 {
        conjugated = true;
        preps = preps.iter().map(|v| flip_y(*v)).collect();
        t_axes = t_axes.iter().map(|v| flip_y(*v)).collect();
        m_axes = m_axes.iter().map(|v| flip_y(*v)).collect();
        let d = match dirs(&t_axes) {
            Some(d) => d,
            None => return Ok(fail_all(eta)),
        };
        frame = match orthonormal_frame(d) {
            Some(f) => f,
            None => return Ok(fail_all(eta)),
        };
    }

    // Coordinates of v in the recovered frame.
    let into_frame = |v: Vec3| -> Vec3 { [dot3(frame[0], v), dot3(frame[1], v), dot3(frame[2], v)] };

    let mut prep_residuals = [0.0; N_PREP];
    for x in 0..N_PREP {
        prep_residuals[x] = norm3(sub3(into_frame(preps[x]), crate::scenario::cube_vector(x)));
    }
    let mut bob_residuals = [0.0; N_SETTING];
    for y in 0..N_SETTING {
        let mut target = [0.0; 3];
        target[y] = eta;
        bob_residuals[y] =
            norm3(sub3(into_frame(t_axes[y]), target)) + s.instruments[y].alpha.abs();
    }
    let mut charlie_residuals = [0.0; N_SETTING];
    for z in 0..N_SETTING {
        let mut target = [0.0; 3];
        target[z] = 1.0;
        charlie_residuals[z] = norm3(sub3(into_frame(scale3(2.0, m_axes[z])), target))
            + (2.0 * s.measurements[z].c - 1.0).abs();
    }

    let max_residual = prep_residuals
        .iter()
        .chain(bob_residuals.iter())
        .chain(charlie_residuals.iter())
        .fold(0.0f64, |a, &b| a.max(b));

    Ok(CanonReport {
        pass: max_residual <= tol,
        conjugated,
        eta,
        prep_residuals,
        bob_residuals,
        charlie_residuals,
        max_residual,
    })
}
