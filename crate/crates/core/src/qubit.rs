//! Exact 2x2 complex linear algebra for qubit states, effects and channels.
//!
//! Everything here is closed-form: eigendecompositions use the explicit
//! characteristic formula for hermitian 2x2 matrices, no iteration anywhere.
//! Validity checks use `TOL_CHECK`; algebraic identities are expected to hold
//! to `TOL_ALG`.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for validity checks (hermiticity, trace, positivity, norms).
pub const TOL_CHECK: f64 = 1e-9;
/// Tolerance for algebraic identities (reconstruction, unitarity, round trips).
pub const TOL_ALG: f64 = 1e-10;
/// Eigenvalue gap below which a hermitian matrix is treated as degenerate.
pub const TOL_DEGENERATE: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

// ---------------------------------------------------------------------------
// real 3-vectors

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm3(a: Vec3) -> f64 {
    dot3(a, a).sqrt()
}

#[inline]
pub fn add3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale3(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

#[inline]
pub fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Unit vector along `a`; zero-length input is a caller bug.
pub fn normalize3(a: Vec3) -> Vec3 {
    let n = norm3(a);
    debug_assert!(n > 0.0, "cannot normalize zero vector");
    scale3(1.0 / n, a)
}

// ---------------------------------------------------------------------------
// 2x2 complex matrices, row-major

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub e: [[C64; 2]; 2],
}

impl Mat2 {
    pub fn new(a: C64, b: C64, c_: C64, d: C64) -> Self {
        Mat2 {
            e: [[a, b], [c_, d]],
        }
    }

    pub fn zero() -> Self {
        Mat2::new(cr(0.0), cr(0.0), cr(0.0), cr(0.0))
    }

    pub fn identity() -> Self {
        Mat2::new(cr(1.0), cr(0.0), cr(0.0), cr(1.0))
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    /// Entry-wise complex conjugate (transpose of the adjoint).
    pub fn conjugate(&self) -> Mat2 {
        Mat2::new(
            self.e[0][0].conj(),
            self.e[0][1].conj(),
            self.e[1][0].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn det(&self) -> C64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        Mat2::new(
            self.e[0][0] * s,
            self.e[0][1] * s,
            self.e[1][0] * s,
            self.e[1][1] * s,
        )
    }

    pub fn scale_re(&self, s: f64) -> Mat2 {
        self.scale(cr(s))
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.e[0][0] + o.e[0][0],
            self.e[0][1] + o.e[0][1],
            self.e[1][0] + o.e[1][0],
            self.e[1][1] + o.e[1][1],
        )
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.e[0][0] - o.e[0][0],
            self.e[0][1] - o.e[0][1],
            self.e[1][0] - o.e[1][0],
            self.e[1][1] - o.e[1][1],
        )
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let mut r = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                r.e[i][j] = self.e[i][0] * o.e[0][j] + self.e[i][1] * o.e[1][j];
            }
        }
        r
    }

    /// Largest absolute deviation from hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.sub(&self.adjoint());
        d.e.iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_dev(&self, other: &Mat2) -> f64 {
        self.sub(other)
            .e
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(cr(0.0), cr(1.0), cr(1.0), cr(0.0))
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0))
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(cr(1.0), cr(0.0), cr(0.0), cr(-1.0))
}

/// c*I + r . sigma, the hermitian matrix with given trace/2 and bloch part.
pub fn pauli_combo(c0: f64, r: Vec3) -> Mat2 {
    Mat2::new(
        cr(c0 + r[2]),
        c(r[0], -r[1]),
        c(r[0], r[1]),
        cr(c0 - r[2]),
    )
}

/// Re tr(a b): the Hilbert-Schmidt pairing, which for a state and an effect
/// is the outcome probability.
pub fn state_trace_product(a: &Mat2, b: &Mat2) -> f64 {
    a.mul(b).trace().re
}

/// Bloch part of a hermitian matrix: r_k = Re tr(M sigma_k).
pub fn bloch_part(m: &Mat2) -> Vec3 {
    [
        (m.e[0][1] + m.e[1][0]).re,
        (m.e[1][0] - m.e[0][1]).im,
        (m.e[0][0] - m.e[1][1]).re,
    ]
}

// ---------------------------------------------------------------------------
// states

/// Density matrix of a qubit. Constructed through `state_from_bloch` or the
/// channel ops, which keep it hermitian, unit-trace and psd.
#[derive(Clone, Copy, Debug)]
pub struct QubitState(pub Mat2);

impl QubitState {
    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    /// Checks hermiticity, unit trace and positivity at `TOL_CHECK`.
    pub fn validate(&self) -> Result<()> {
        let dev = self.0.hermiticity_defect();
        if dev > TOL_CHECK {
            return Err(Error::NotHermitian { dev });
        }
        let tr = self.0.trace();
        if (tr.re - 1.0).abs() > TOL_CHECK || tr.im.abs() > TOL_CHECK {
            return Err(Error::Domain {
                what: "state trace",
                value: tr.re,
                lo: 1.0,
                hi: 1.0,
            });
        }
        let (lp, lm) = eigvals2(&self.0)?;
        let min_eig = lp.min(lm);
        if min_eig < -TOL_CHECK {
            return Err(Error::NotPsd { min_eig });
        }
        Ok(())
    }
}

/// (I + r . sigma) / 2 for |r| <= 1.
pub fn state_from_bloch(r: Vec3) -> Result<QubitState> {
    let len = norm3(r);
    if len > 1.0 + TOL_CHECK {
        return Err(Error::BlochTooLong {
            len,
            tol: TOL_CHECK,
        });
    }
    Ok(QubitState(pauli_combo(0.5, scale3(0.5, r))))
}

/// Inverse of `state_from_bloch`: r_k = Re tr(rho sigma_k).
pub fn bloch_from_state(rho: &QubitState) -> Vec3 {
    bloch_part(&rho.0)
}

// ---------------------------------------------------------------------------
// hermitian eigendecomposition, explicit characteristic formula

/// Eigenvalues of a hermitian 2x2 matrix, descending: (lambda_plus, lambda_minus).
pub fn eigvals2(m: &Mat2) -> Result<(f64, f64)> {
    let dev = m.hermiticity_defect();
    if dev > TOL_CHECK {
        return Err(Error::NotHermitian { dev });
    }
    let a = m.e[0][0].re;
    let d = m.e[1][1].re;
    let b = m.e[0][1];
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    Ok((mid + rad, mid - rad))
}

/// Full eigendecomposition of a hermitian 2x2 matrix.
///
/// Eigenvectors are unit columns with the first nonzero entry made
/// real-positive so the decomposition is deterministic. A gap below
/// `TOL_DEGENERATE` returns the canonical basis pair.
pub struct Eig2 {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub v_plus: [C64; 2],
    pub v_minus: [C64; 2],
}

fn fix_phase(v: [C64; 2]) -> [C64; 2] {
    let lead = if v[0].norm() > TOL_DEGENERATE {
        v[0]
    } else {
        v[1]
    };
    let n = lead.norm();
    if n == 0.0 {
        return v;
    }
    let ph = lead.conj() / cr(n);
    [v[0] * ph, v[1] * ph]
}

fn unit2(v: [C64; 2]) -> [C64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / cr(n), v[1] / cr(n)]
}

pub fn eig2(m: &Mat2) -> Result<Eig2> {
    let (lp, lm) = eigvals2(m)?;
    if lp - lm < TOL_DEGENERATE {
        // Degenerate: every basis diagonalizes; pick the canonical one.
        return Ok(Eig2 {
            lambda_plus: lp,
            lambda_minus: lm,
            v_plus: [cr(1.0), cr(0.0)],
            v_minus: [cr(0.0), cr(1.0)],
        });
    }
    let a = m.e[0][0].re;
    let d = m.e[1][1].re;
    let b = m.e[0][1];
    // Two algebraically equivalent eigenvector forms; take the better
    // conditioned one per eigenvalue.
    let vec_for = |lambda: f64| -> [C64; 2] {
        let c1 = [b, cr(lambda - a)];
        let c2 = [cr(lambda - d), b.conj()];
        let n1 = c1[0].norm_sqr() + c1[1].norm_sqr();
        let n2 = c2[0].norm_sqr() + c2[1].norm_sqr();
        let v = if n1 >= n2 { c1 } else { c2 };
        fix_phase(unit2(v))
    };
    Ok(Eig2 {
        lambda_plus: lp,
        lambda_minus: lm,
        v_plus: vec_for(lp),
        v_minus: vec_for(lm),
    })
}

/// Rank-one projector |v><v|.
pub fn projector(v: [C64; 2]) -> Mat2 {
    Mat2::new(
        v[0] * v[0].conj(),
        v[0] * v[1].conj(),
        v[1] * v[0].conj(),
        v[1] * v[1].conj(),
    )
}

// ---------------------------------------------------------------------------
// psd square root and polar decomposition

/// Principal square root of a psd hermitian matrix. Eigenvalues in
/// [-TOL_CHECK, 0) are clamped to zero; below that the input is rejected.
pub fn sqrt_psd(m: &Mat2) -> Result<Mat2> {
    let e = eig2(m)?;
    let min_eig = e.lambda_minus;
    if min_eig < -TOL_CHECK {
        return Err(Error::NotPsd { min_eig });
    }
    let sp = e.lambda_plus.max(0.0).sqrt();
    let sm = e.lambda_minus.max(0.0).sqrt();
    Ok(projector(e.v_plus)
        .scale_re(sp)
        .add(&projector(e.v_minus).scale_re(sm)))
}

/// Polar decomposition K = U P with U unitary and P = sqrt(K^dag K) psd.
///
/// For singular K the unitary is completed deterministically: each null
/// right-singular vector is mapped to the unit vector spanning the orthogonal
/// complement of the range, with the phase of every column of U fixed so its
/// first nonzero entry is real-positive.
pub fn polar_decompose(k: &Mat2) -> Result<(Mat2, Mat2)> {
    let gram = k.adjoint().mul(k);
    let e = eig2(&gram)?;
    if e.lambda_minus < -TOL_CHECK {
        return Err(Error::NotPsd {
            min_eig: e.lambda_minus,
        });
    }
    let s_plus = e.lambda_plus.max(0.0).sqrt();
    let s_minus = e.lambda_minus.max(0.0).sqrt();
    let p = projector(e.v_plus)
        .scale_re(s_plus)
        .add(&projector(e.v_minus).scale_re(s_minus));

    let cutoff = TOL_CHECK.sqrt() * (1.0_f64).max(s_plus);
    let apply = |v: [C64; 2]| -> [C64; 2] {
        [
            k.e[0][0] * v[0] + k.e[0][1] * v[1],
            k.e[1][0] * v[0] + k.e[1][1] * v[1],
        ]
    };

    let (u0, u1);
    if s_plus <= cutoff {
        // K is (numerically) zero: U = I by convention.
        u0 = [cr(1.0), cr(0.0)];
        u1 = [cr(0.0), cr(1.0)];
    } else if s_minus <= cutoff {
        // Rank one: one honest left-singular vector, the other column spans
        // the orthogonal complement of the range, phase-fixed.
        let w = apply(e.v_plus);
        let a = fix_phase(unit2(w));
        let b = fix_phase([-(a[1].conj()), a[0].conj()]);
        u0 = a;
        u1 = b;
        let u_cols = [u0, u1];
        let v_cols = [e.v_plus, e.v_minus];
        let mut u = Mat2::zero();
        for (uc, vc) in u_cols.iter().zip(v_cols.iter()) {
            // U = sum_i |u_i><v_i|
            u = u.add(&Mat2::new(
                uc[0] * vc[0].conj(),
                uc[0] * vc[1].conj(),
                uc[1] * vc[0].conj(),
                uc[1] * vc[1].conj(),
            ));
        }
        return Ok((u, p));
    } else {
        // Full rank: U = K P^{-1} via the closed-form inverse of P.
        let det = p.det();
        let p_inv = Mat2::new(p.e[1][1], -p.e[0][1], -p.e[1][0], p.e[0][0]).scale(cr(1.0) / det);
        let u = k.mul(&p_inv);
        return Ok((u, p));
    }
    let u = Mat2::new(u0[0], u1[0], u0[1], u1[1]);
    Ok((u, p))
}

// ---------------------------------------------------------------------------
// binary effects parametrized by bias and bloch axis

/// Effect for outcome b of a binary measurement with bias `alpha` and bloch
/// axis `t`: B_b = ((1 + (-1)^b alpha) I + (-1)^b t . sigma) / 2.
/// Valid iff |t| + |alpha| <= 1.
pub fn effect_from_bias_axis(alpha: f64, t: Vec3, b: u8) -> Result<Mat2> {
    let excess = norm3(t) + alpha.abs();
    if excess > 1.0 + TOL_CHECK {
        return Err(Error::InvalidInstrument { excess });
    }
    let sign = if b == 0 { 1.0 } else { -1.0 };
    Ok(pauli_combo(
        0.5 * (1.0 + sign * alpha),
        scale3(0.5 * sign, t),
    ))
}

/// Largest eigenvalue of sqrt(B) (a . sigma) sqrt(B), computed by direct
/// eigendecomposition of the (hermitian) kernel.
pub fn lambda_max_kernel(effect: &Mat2, a: Vec3) -> Result<f64> {
    let root = sqrt_psd(effect)?;
    let mid = pauli_combo(0.0, a);
    let kern = root.mul(&mid).mul(&root);
    let (lp, _) = eigvals2(&kern)?;
    Ok(lp)
}

/// Closed form for the b-sum of `lambda_max_kernel` over both effects of a
/// (alpha, t) pair against direction `a`:
///
///   sum_b lambda_max[sqrt(B_b) (a.sigma) sqrt(B_b)]
///     = sum_b (|a|/2) sqrt((1 + (-1)^b alpha)^2 - |t|^2 (1 - cos^2 g))
///
/// where g is the angle between t and a. The individual terms agree with the
/// per-b eigenvalues exactly when t is orthogonal to a; their sum agrees
/// always.
pub fn lambda_max_pair_sum_closed(alpha: f64, t: Vec3, a: Vec3) -> f64 {
    let ta = norm3(t);
    let aa = norm3(a);
    let cos_g = if ta > 0.0 && aa > 0.0 {
        dot3(t, a) / (ta * aa)
    } else {
        0.0
    };
    let cross = ta * ta * (1.0 - cos_g * cos_g);
    let mut total = 0.0;
    for b in 0..2u8 {
        let sign = if b == 0 { 1.0 } else { -1.0 };
        let rad = (1.0 + sign * alpha) * (1.0 + sign * alpha) - cross;
        total += 0.5 * aa * rad.max(0.0).sqrt();
    }
    total
}
