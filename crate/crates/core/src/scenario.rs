//! The three-party prepare-transform-measure scenario.
//!
//! Alice encodes three bits x = x0 x1 x2 into one qubit, Bob applies a binary
//! instrument chosen by y and announces b, Charlie measures the outgoing
//! state with a binary measurement chosen by z and announces c. Inputs are
//! uniform. A strategy is stored parametrically: preparation bloch vectors,
//! instrument parameters (bias alpha, axis t, lab unitary u with Kraus
//! operators K_b = u sqrt(B_b)), and binary measurement effects
//! C_{0|z} = c I + m . sigma.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{
    dot3, effect_from_bias_axis, norm3, pauli_combo, scale3, state_from_bloch, sqrt_psd,
    state_trace_product, Mat2, QubitState, Vec3, TOL_CHECK,
};

/// Number of preparations (3-bit strings).
pub const N_PREP: usize = 8;
/// Number of instrument / measurement settings.
pub const N_SETTING: usize = 3;
/// Probability below which an outcome branch counts as unreachable.
pub const TOL_BRANCH: f64 = 1e-12;
/// Maximum supported chain length for `sequential_chain`.
pub const MAX_CHAIN: usize = 20;

/// Bit j (0 = leftmost) of the 3-bit string x.
#[inline]
pub fn bit(x: usize, j: usize) -> u8 {
    ((x >> (2 - j)) & 1) as u8
}

/// (-1)^bit(x, j) as f64.
#[inline]
pub fn sign_bit(x: usize, j: usize) -> f64 {
    1.0 - 2.0 * bit(x, j) as f64
}

/// Bloch vector of the ideal preparation for x: the cube vertex
/// ((-1)^x0, (-1)^x1, (-1)^x2) / sqrt(3).
pub fn cube_vector(x: usize) -> Vec3 {
    let s = 3.0_f64.sqrt();
    [
        sign_bit(x, 0) / s,
        sign_bit(x, 1) / s,
        sign_bit(x, 2) / s,
    ]
}

fn axis(y: usize) -> Vec3 {
    let mut v = [0.0; 3];
    v[y] = 1.0;
    v
}

// ---------------------------------------------------------------------------
// strategy components

/// Binary instrument with Kraus operators K_b = u sqrt(B_b), where
/// B_0 = ((1 + alpha) I + t . sigma)/2 and B_1 = I - B_0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Instrument {
    pub alpha: f64,
    pub t: Vec3,
    #[serde(with = "mat2_wire")]
    pub u: Mat2,
}

impl Instrument {
    /// Unbiased instrument along `t` with trivial lab unitary.
    pub fn luders(t: Vec3) -> Self {
        Instrument {
            alpha: 0.0,
            t,
            u: Mat2::identity(),
        }
    }

    pub fn effect(&self, b: u8) -> Result<Mat2> {
        effect_from_bias_axis(self.alpha, self.t, b)
    }

    pub fn kraus(&self, b: u8) -> Result<Mat2> {
        Ok(self.u.mul(&sqrt_psd(&self.effect(b)?)?))
    }

    /// B_0 - B_1 = alpha I + t . sigma.
    pub fn observable(&self) -> Mat2 {
        pauli_combo(self.alpha, self.t)
    }

    pub fn validate(&self) -> Result<()> {
        let excess = norm3(self.t) + self.alpha.abs();
        if excess > 1.0 + TOL_CHECK {
            return Err(Error::InvalidInstrument { excess });
        }
        let dev = self
            .u
            .adjoint()
            .mul(&self.u)
            .max_dev(&Mat2::identity());
        if dev > TOL_CHECK {
            return Err(Error::Parse(format!(
                "instrument unitary deviates from unitarity by {dev}"
            )));
        }
        Ok(())
    }
}

/// Binary measurement with effects C_0 = c I + m . sigma and C_1 = I - C_0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Measurement {
    pub c: f64,
    pub m: Vec3,
}

impl Measurement {
    /// Projective measurement along the unit vector `axis`.
    pub fn sharp(axis: Vec3) -> Self {
        Measurement {
            c: 0.5,
            m: scale3(0.5, axis),
        }
    }

    pub fn effect(&self, outcome: u8) -> Mat2 {
        if outcome == 0 {
            pauli_combo(self.c, self.m)
        } else {
            pauli_combo(1.0 - self.c, scale3(-1.0, self.m))
        }
    }

    pub fn validate(&self) -> Result<()> {
        let len = norm3(self.m);
        let cap = self.c.min(1.0 - self.c);
        if len > cap + TOL_CHECK {
            return Err(Error::InvalidMeasurement { len, cap });
        }
        Ok(())
    }
}

/// Full strategy for the three parties.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Strategy {
    /// Bloch vectors of Alice's eight preparations, indexed by x.
    pub preparations: [Vec3; N_PREP],
    /// Bob's instruments, indexed by y.
    pub instruments: [Instrument; N_SETTING],
    /// Charlie's measurements, indexed by z.
    pub measurements: [Measurement; N_SETTING],
}

mod mat2_wire {
    use crate::qubit::{c, Mat2};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Mat2, s: S) -> std::result::Result<S::Ok, S::Error> {
        let flat: [[f64; 2]; 4] = [
            [m.e[0][0].re, m.e[0][0].im],
            [m.e[0][1].re, m.e[0][1].im],
            [m.e[1][0].re, m.e[1][0].im],
            [m.e[1][1].re, m.e[1][1].im],
        ];
        flat.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Mat2, D::Error> {
        let flat = <[[f64; 2]; 4]>::deserialize(d)?;
        Ok(Mat2::new(
            c(flat[0][0], flat[0][1]),
            c(flat[1][0], flat[1][1]),
            c(flat[2][0], flat[2][1]),
            c(flat[3][0], flat[3][1]),
        ))
    }
}

/// The eight cube-vertex preparations.
pub fn ideal_preparations() -> [Vec3; N_PREP] {
    std::array::from_fn(cube_vector)
}

/// Unbiased instruments of sharpness `eta` along the coordinate axes.
pub fn luders_instrument_set(eta: f64) -> Result<[Instrument; N_SETTING]> {
    if !(0.0..=1.0 + TOL_CHECK).contains(&eta) {
        return Err(Error::Domain {
            what: "eta",
            value: eta,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(std::array::from_fn(|y| {
        Instrument::luders(scale3(eta.min(1.0), axis(y)))
    }))
}

/// Projective measurements along the coordinate axes.
pub fn ideal_measurements() -> [Measurement; N_SETTING] {
    std::array::from_fn(|z| Measurement::sharp(axis(z)))
}

impl Strategy {
    /// The one-parameter family that trades Bob's score against Charlie's:
    /// cube preparations, sharpness-eta instruments, sharp measurements.
    pub fn ideal(eta: f64) -> Result<Strategy> {
        Ok(Strategy {
            preparations: ideal_preparations(),
            instruments: luders_instrument_set(eta)?,
            measurements: ideal_measurements(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.preparations {
            let len = norm3(*r);
            if len > 1.0 + TOL_CHECK {
                return Err(Error::BlochTooLong {
                    len,
                    tol: TOL_CHECK,
                });
            }
        }
        for ins in &self.instruments {
            ins.validate()?;
        }
        for meas in &self.measurements {
            meas.validate()?;
        }
        Ok(())
    }

    pub fn prep_state(&self, x: usize) -> Result<QubitState> {
        state_from_bloch(self.preparations[x])
    }

    /// Average post-instrument state of preparation x: (1/3) sum_{y,b} K rho K^dag.
    pub fn effective_state(&self, x: usize) -> Result<QubitState> {
        effective_state(&self.prep_state(x)?, &self.instruments)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Strategy> {
        let s: Strategy = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }
}

// ---------------------------------------------------------------------------
// simulation

/// State after Bob sees outcome b: K rho K^dag / p. An outcome with
/// probability at or below `TOL_BRANCH` has no post-measurement state.
pub fn post_measurement_state(
    rho: &QubitState,
    instrument: &Instrument,
    b: u8,
) -> Result<QubitState> {
    let k = instrument.kraus(b)?;
    let out = k.mul(rho.matrix()).mul(&k.adjoint());
    let p = out.trace().re;
    if p <= TOL_BRANCH {
        return Err(Error::UnreachableOutcome { prob: p });
    }
    Ok(QubitState(out.scale_re(1.0 / p)))
}

/// Average state leaving Bob's lab when y is uniform and b is forgotten:
/// (1/3) sum_{y,b} K_{b|y} rho K_{b|y}^dag.
pub fn effective_state(
    rho: &QubitState,
    instruments: &[Instrument; N_SETTING],
) -> Result<QubitState> {
    let mut acc = Mat2::zero();
    for ins in instruments {
        for b in 0..2u8 {
            let k = ins.kraus(b)?;
            acc = acc.add(&k.mul(rho.matrix()).mul(&k.adjoint()));
        }
    }
    Ok(QubitState(acc.scale_re(1.0 / N_SETTING as f64)))
}

/// Full joint behavior p(b, c | x, y, z) together with the marginals the
/// witnesses consume.
#[derive(Clone, Debug)]
pub struct JointTable {
    /// p[x][y][z][b][c]
    pub p: [[[[[f64; 2]; 2]; N_SETTING]; N_SETTING]; N_PREP],
    /// p(b | x, y), independent of z by no-signaling.
    pub bob: [[[f64; 2]; N_SETTING]; N_PREP],
    /// p(c | x, z), y uniform and b forgotten.
    pub charlie: [[[f64; 2]; N_SETTING]; N_PREP],
}

/// Simulate the full behavior of a strategy.
pub fn joint_table(s: &Strategy) -> Result<JointTable> {
    s.validate()?;
    let mut p = [[[[[0.0; 2]; 2]; N_SETTING]; N_SETTING]; N_PREP];
    let mut bob = [[[0.0; 2]; N_SETTING]; N_PREP];
    let mut charlie = [[[0.0; 2]; N_SETTING]; N_PREP];
    for x in 0..N_PREP {
        let rho = s.prep_state(x)?;
        for y in 0..N_SETTING {
            for b in 0..2u8 {
                let k = s.instruments[y].kraus(b)?;
                let out = k.mul(rho.matrix()).mul(&k.adjoint());
                let pb = out.trace().re;
                bob[x][y][b as usize] = pb;
                for z in 0..N_SETTING {
                    for c_out in 0..2u8 {
                        let eff = s.measurements[z].effect(c_out);
                        let joint = state_trace_product(&out, &eff);
                        p[x][y][z][b as usize][c_out as usize] = joint;
                        charlie[x][z][c_out as usize] += joint / N_SETTING as f64;
                    }
                }
            }
        }
    }
    Ok(JointTable { p, bob, charlie })
}

impl JointTable {
    /// Largest deviation of any conditional block from normalization.
    pub fn normalization_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in 0..N_PREP {
            for y in 0..N_SETTING {
                for z in 0..N_SETTING {
                    let s: f64 = self.p[x][y][z]
                        .iter()
                        .flatten()
                        .sum();
                    worst = worst.max((s - 1.0).abs());
                }
            }
        }
        worst
    }

    /// Largest z-dependence of Bob's marginal computed from the joint block,
    /// a no-signaling check.
    pub fn signaling_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in 0..N_PREP {
            for y in 0..N_SETTING {
                for b in 0..2 {
                    for z in 0..N_SETTING {
                        let marg: f64 = self.p[x][y][z][b].iter().sum();
                        worst = worst.max((marg - self.bob[x][y][b]).abs());
                    }
                }
            }
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// noise and chaining

/// Shrink every party's bloch-sphere data by its visibility: preparations by
/// `va`, instrument axes by `vb` (Kraus operators are rebuilt from the shrunk
/// effects, keeping each instrument's lab unitary), measurement bloch parts
/// by `vc`.
pub fn apply_visibility(s: &Strategy, va: f64, vb: f64, vc: f64) -> Result<Strategy> {
    for (name, v) in [("va", va), ("vb", vb), ("vc", vc)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain {
                what: name,
                value: v,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    let mut out = s.clone();
    for r in &mut out.preparations {
        *r = scale3(va, *r);
    }
    for ins in &mut out.instruments {
        ins.t = scale3(vb, ins.t);
    }
    for meas in &mut out.measurements {
        meas.m = scale3(vc, meas.m);
    }
    Ok(out)
}

/// Scores A_1 .. A_k of a chain of k sharp decoders, each acting on the
/// average output ensemble of the previous one, starting from the ideal
/// preparations. Decoder i scores A_i = (1/24) sum_{x,y} p(b = x_y | x, y).
pub fn sequential_chain(k: usize) -> Result<Vec<f64>> {
    if k > MAX_CHAIN {
        return Err(Error::ChainTooLong { k, max: MAX_CHAIN });
    }
    let instruments = luders_instrument_set(1.0)?;
    let mut states: Vec<QubitState> = (0..N_PREP)
        .map(|x| state_from_bloch(cube_vector(x)))
        .collect::<Result<_>>()?;
    let mut scores = Vec::with_capacity(k);
    for _ in 0..k {
        let mut total = 0.0;
        for (x, rho) in states.iter().enumerate() {
            for (y, ins) in instruments.iter().enumerate() {
                let eff = ins.effect(bit(x, y))?;
                total += state_trace_product(rho.matrix(), &eff);
            }
        }
        scores.push(total / 24.0);
        states = states
            .iter()
            .map(|rho| effective_state(rho, &instruments))
            .collect::<Result<_>>()?;
    }
    Ok(scores)
}

// ---------------------------------------------------------------------------
// random strategies

/// Sampling modes for `random_strategy`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomMode {
    /// Mixed preparations, biased instruments with random lab unitaries,
    /// random projective measurements.
    General,
    /// Like `General` but with pure preparations.
    PurePrep,
    /// The ideal family at a random sharpness, conjugated by a random
    /// rotation.
    Parametrized,
}

struct Sampler<R: rand::Rng> {
    rng: R,
}

impl<R: rand::Rng> Sampler<R> {
    fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    fn gaussian(&mut self) -> f64 {
        // Box-Muller; the log argument is kept away from zero.
        let u1: f64 = (1.0 - self.rng.gen::<f64>()).max(f64::MIN_POSITIVE);
        let u2: f64 = self.rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    fn unit_vec(&mut self) -> Vec3 {
        let z = 2.0 * self.uniform() - 1.0;
        let phi = 2.0 * std::f64::consts::PI * self.uniform();
        let r = (1.0 - z * z).max(0.0).sqrt();
        [r * phi.cos(), r * phi.sin(), z]
    }

    fn unit_quaternion(&mut self) -> [f64; 4] {
        loop {
            let q = [
                self.gaussian(),
                self.gaussian(),
                self.gaussian(),
                self.gaussian(),
            ];
            let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
            if n > 1e-6 {
                return [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
            }
        }
    }

    /// Haar-random special unitary q0 I - i (q1, q2, q3) . sigma.
    fn random_su2(&mut self) -> Mat2 {
        let q = self.unit_quaternion();
        Mat2::new(
            crate::qubit::c(q[0], -q[3]),
            crate::qubit::c(-q[2], -q[1]),
            crate::qubit::c(q[2], -q[1]),
            crate::qubit::c(q[0], q[3]),
        )
    }

    /// Rotation matrix of the unit quaternion, rows r[i].
    fn random_rotation(&mut self) -> [Vec3; 3] {
        let [w, x, y, z] = self.unit_quaternion();
        [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ]
    }
}

fn rotate(rows: &[Vec3; 3], v: Vec3) -> Vec3 {
    [dot3(rows[0], v), dot3(rows[1], v), dot3(rows[2], v)]
}

/// Deterministic pseudo-random strategy for the given seed.
pub fn random_strategy(seed: u64, mode: RandomMode) -> Strategy {
    use rand::SeedableRng;
    let mut s = Sampler {
        rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed),
    };
    match mode {
        RandomMode::Parametrized => {
            let eta = s.uniform();
            let rot = s.random_rotation();
            let preparations = std::array::from_fn(|x| rotate(&rot, cube_vector(x)));
            let instruments =
                std::array::from_fn(|y| Instrument::luders(scale3(eta, rotate(&rot, axis(y)))));
            let measurements =
                std::array::from_fn(|z| Measurement::sharp(rotate(&rot, axis(z))));
            Strategy {
                preparations,
                instruments,
                measurements,
            }
        }
        RandomMode::General | RandomMode::PurePrep => {
            let preparations = std::array::from_fn(|_| {
                let dir = s.unit_vec();
                let radius = if mode == RandomMode::PurePrep {
                    1.0
                } else {
                    // radius ~ u^(1/3) is uniform over the ball
                    s.uniform().cbrt()
                };
                scale3(radius, dir)
            });
            let instruments = std::array::from_fn(|_| {
                let dir = s.unit_vec();
                let len = s.uniform();
                let alpha = (1.0 - len) * (2.0 * s.uniform() - 1.0);
                Instrument {
                    alpha,
                    t: scale3(len, dir),
                    u: s.random_su2(),
                }
            });
            let measurements = std::array::from_fn(|_| Measurement::sharp(s.unit_vec()));
            Strategy {
                preparations,
                instruments,
                measurements,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{bloch_from_state, TOL_ALG};
    use crate::witness::{witness_ab, witness_ac};

    const S3: f64 = 1.7320508075688772;

    #[test]
    fn cube_vectors_are_unit_and_signed() {
        for x in 0..N_PREP {
            let v = cube_vector(x);
            assert!((norm3(v) - 1.0).abs() < 1e-15);
            assert!((v[0] * S3 - sign_bit(x, 0)).abs() < 1e-15);
        }
        // x = 5 = binary 101
        let v = cube_vector(5);
        assert!(v[0] < 0.0 && v[1] > 0.0 && v[2] < 0.0);
    }

    #[test]
    fn luders_effects_complete() {
        let ins = luders_instrument_set(0.7).unwrap();
        for i in &ins {
            let sum = i.effect(0).unwrap().add(&i.effect(1).unwrap());
            assert!(sum.max_dev(&Mat2::identity()) < TOL_ALG);
            // Kraus completeness: sum_b K^dag K = I
            let mut acc = Mat2::zero();
            for b in 0..2u8 {
                let k = i.kraus(b).unwrap();
                acc = acc.add(&k.adjoint().mul(&k));
            }
            assert!(acc.max_dev(&Mat2::identity()) < TOL_ALG);
        }
    }

    #[test]
    fn post_measurement_sharp_projects() {
        let rho = state_from_bloch([1.0 / S3, 1.0 / S3, 1.0 / S3]).unwrap();
        let ins = luders_instrument_set(1.0).unwrap();
        let out = post_measurement_state(&rho, &ins[2], 0).unwrap();
        let r = bloch_from_state(&out);
        assert!((r[2] - 1.0).abs() < TOL_ALG);
        assert!(r[0].abs() < TOL_ALG && r[1].abs() < TOL_ALG);
    }

    #[test]
    fn post_measurement_unreachable_branch_errors() {
        let rho = state_from_bloch([0.0, 0.0, -1.0]).unwrap();
        let ins = luders_instrument_set(1.0).unwrap();
        let err = post_measurement_state(&rho, &ins[2], 0).unwrap_err();
        assert!(matches!(err, Error::UnreachableOutcome { .. }));
    }

    #[test]
    fn effective_state_shrinks_uniformly() {
        // For axis-aligned unbiased instruments the average channel is
        // r -> r (1 + 2 sqrt(1 - eta^2)) / 3.
        let eta = 1.0 / S3;
        let shrink = (1.0 + 2.0 * (1.0 - eta * eta).sqrt()) / 3.0;
        let s = Strategy::ideal(eta).unwrap();
        for x in 0..N_PREP {
            let r_in = s.preparations[x];
            let r_out = bloch_from_state(&s.effective_state(x).unwrap());
            for k in 0..3 {
                assert!((r_out[k] - shrink * r_in[k]).abs() < TOL_ALG);
            }
        }
    }

    #[test]
    fn joint_table_matches_closed_forms() {
        for eta in [0.3, 1.0 / S3, 0.9] {
            let s = Strategy::ideal(eta).unwrap();
            let t = joint_table(&s).unwrap();
            let a_ab = witness_ab(&t);
            let a_ac = witness_ac(&t);
            let ab_expect = 0.5 + S3 * eta / 6.0;
            let ac_expect = 0.5 + S3 / 18.0 * (1.0 + 2.0 * (1.0 - eta * eta).sqrt());
            assert!((a_ab - ab_expect).abs() < 1e-9, "ab at eta={eta}");
            assert!((a_ac - ac_expect).abs() < 1e-9, "ac at eta={eta}");
            assert!(t.normalization_defect() < 1e-9);
            assert!(t.signaling_defect() < 1e-9);
        }
    }

    #[test]
    fn visibility_scales_bob_witness() {
        let s = Strategy::ideal(1.0 / S3).unwrap();
        let noisy = apply_visibility(&s, 0.95, 0.90, 0.95).unwrap();
        let t = joint_table(&noisy).unwrap();
        assert!((witness_ab(&t) - 0.6425).abs() < 1e-9);
    }

    #[test]
    fn visibility_composes() {
        let s = Strategy::ideal(0.8).unwrap();
        let once = apply_visibility(&apply_visibility(&s, 0.9, 0.8, 0.7).unwrap(), 0.5, 0.6, 0.9)
            .unwrap();
        let joint = apply_visibility(&s, 0.45, 0.48, 0.63).unwrap();
        let ta = joint_table(&once).unwrap();
        let tb = joint_table(&joint).unwrap();
        for x in 0..N_PREP {
            for y in 0..N_SETTING {
                for z in 0..N_SETTING {
                    for b in 0..2 {
                        for c_out in 0..2 {
                            assert!(
                                (ta.p[x][y][z][b][c_out] - tb.p[x][y][z][b][c_out]).abs() < 1e-12
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chain_scores_follow_geometric_law() {
        let scores = sequential_chain(5).unwrap();
        for (i, a) in scores.iter().enumerate() {
            let expect = 0.5 * (1.0 + S3 / 3.0_f64.powi(i as i32 + 1));
            assert!((a - expect).abs() < 1e-9, "step {i}: {a} vs {expect}");
        }
        assert!(sequential_chain(MAX_CHAIN + 1).is_err());
    }

    #[test]
    fn random_strategy_is_deterministic_and_valid() {
        for mode in [
            RandomMode::General,
            RandomMode::PurePrep,
            RandomMode::Parametrized,
        ] {
            let a = random_strategy(42, mode);
            let b = random_strategy(42, mode);
            a.validate().unwrap();
            assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
            let c = random_strategy(43, mode);
            assert_ne!(a.to_json().unwrap(), c.to_json().unwrap());
        }
    }

    #[test]
    fn pure_prep_mode_puts_preps_on_sphere() {
        let s = random_strategy(7, RandomMode::PurePrep);
        for r in &s.preparations {
            assert!((norm3(*r) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parametrized_mode_sits_on_the_ideal_curve() {
        let s = random_strategy(11, RandomMode::Parametrized);
        let t = joint_table(&s).unwrap();
        let eta = norm3(s.instruments[0].t);
        let ab_expect = 0.5 + S3 * eta / 6.0;
        let ac_expect = 0.5 + S3 / 18.0 * (1.0 + 2.0 * (1.0 - eta * eta).sqrt());
        assert!((witness_ab(&t) - ab_expect).abs() < 1e-9);
        assert!((witness_ac(&t) - ac_expect).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let s = random_strategy(3, RandomMode::General);
        let text = s.to_json().unwrap();
        let back = Strategy::from_json(&text).unwrap();
        assert_eq!(text, back.to_json().unwrap());
        let ta = joint_table(&s).unwrap();
        let tb = joint_table(&back).unwrap();
        assert_eq!(witness_ab(&ta), witness_ab(&tb));
        assert_eq!(witness_ac(&ta), witness_ac(&tb));
    }

    #[test]
    fn from_json_rejects_invalid() {
        let mut s = random_strategy(3, RandomMode::General);
        s.instruments[0].t = [0.9, 0.9, 0.0];
        let text = serde_json::to_string(&s).unwrap();
        assert!(Strategy::from_json(&text).is_err());
    }
}
