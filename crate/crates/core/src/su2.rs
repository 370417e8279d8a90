//! Exact 2×2 unitary algebra, Bloch-sphere geometry, and the distance
//! measures used to score every approximation in this crate.
//!
//! Sign convention, fixed project-wide: a rotation by angle θ about the unit
//! axis n̂ is
//!
//!   R(n̂, θ) = cos(θ/2)·I − i·sin(θ/2)·(n̂·σ⃗)
//!
//! so that `rotation(ẑ, θ) = diag(e^{−iθ/2}, e^{iθ/2})`. All Bloch-sphere
//! statements elsewhere in the crate derive from this convention.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entrywise tolerance for unitarity / determinant checks.
pub const UNITARY_TOL: f64 = 1e-12;
/// Tolerance for geometric assertions (unit axes, unit states, sphere radii).
pub const GEOM_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 unitary operator, compared up to global phase throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    /// Row-major entries.
    pub m: [[Complex64; 2]; 2],
}

impl Unitary2 {
    /// Build from row-major entries, checking unitarity and |det| = 1 at the
    /// crate tolerance.
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let u = Unitary2 { m };
        let p = u.adjoint().mul(&u);
        let id = Unitary2::identity();
        for r in 0..2 {
            for c in 0..2 {
                if (p.m[r][c] - id.m[r][c]).norm() > UNITARY_TOL {
                    return Err(Error::Domain(format!(
                        "matrix is not unitary (U†U deviates by {:.3e} at ({r},{c}))",
                        (p.m[r][c] - id.m[r][c]).norm()
                    )));
                }
            }
        }
        if (u.det().norm() - 1.0).abs() > UNITARY_TOL {
            return Err(Error::Domain("matrix determinant is not unimodular".into()));
        }
        Ok(u)
    }

    pub fn identity() -> Self {
        Unitary2 {
            m: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Unitary2) -> Unitary2 {
        let a = &self.m;
        let b = &rhs.m;
        let mut m = [[ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Unitary2 { m }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Unitary2 {
        Unitary2 {
            m: [
                [self.m[0][0].conj(), self.m[1][0].conj()],
                [self.m[0][1].conj(), self.m[1][1].conj()],
            ],
        }
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Multiply every entry by a phase factor. Used in tests to check
    /// phase invariance; the phase is invisible to every distance here.
    pub fn scaled(&self, phase: Complex64) -> Unitary2 {
        let mut m = self.m;
        for row in &mut m {
            for e in row {
                *e *= phase;
            }
        }
        Unitary2 { m }
    }

    /// Largest entrywise deviation of U†U from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = Unitary2::identity();
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((p.m[r][c] - id.m[r][c]).norm());
            }
        }
        worst
    }
}

/// A two-component complex state vector.
#[derive(Debug, Clone, Copy)]
pub struct State2 {
    pub amp: [Complex64; 2],
}

impl State2 {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let s = State2 { amp: [a, b] };
        if (s.norm() - 1.0).abs() > GEOM_TOL {
            return Err(Error::Domain(format!(
                "state norm {} is not 1 within {GEOM_TOL:e}",
                s.norm()
            )));
        }
        Ok(s)
    }

    /// |0⟩
    pub fn ket0() -> Self {
        State2 { amp: [ONE, ZERO] }
    }

    /// |+⟩ = (|0⟩ + |1⟩)/√2
    pub fn plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        State2 { amp: [h, h] }
    }

    pub fn norm(&self) -> f64 {
        (self.amp[0].norm_sqr() + self.amp[1].norm_sqr()).sqrt()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &State2) -> Complex64 {
        self.amp[0].conj() * other.amp[0] + self.amp[1].conj() * other.amp[1]
    }
}

/// A point in the closed unit ball: (⟨X⟩, ⟨Y⟩, ⟨Z⟩).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &BlochVector) -> BlochVector {
        BlochVector::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn scale(&self, s: f64) -> BlochVector {
        BlochVector::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn add(&self, o: &BlochVector) -> BlochVector {
        BlochVector::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn sub(&self, o: &BlochVector) -> BlochVector {
        BlochVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn component(&self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }
}

/// Phase-free embedding of SU(2) as a unit quaternion with a canonical sign:
/// the first component with magnitude above 1e-9 is made positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub fn identity() -> Self {
        Quat {
            w: 1.0,
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z }.normalized().canonicalized()
    }

    fn normalized(&self) -> Quat {
        let n = (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        Quat {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }

    fn canonicalized(&self) -> Quat {
        for c in [self.w, self.x, self.y, self.z] {
            if c.abs() > 1e-9 {
                return if c < 0.0 {
                    Quat {
                        w: -self.w,
                        x: -self.x,
                        y: -self.y,
                        z: -self.z,
                    }
                } else {
                    *self
                };
            }
        }
        *self
    }

    /// Hamilton product. The result is renormalized and sign-canonicalized.
    pub fn mul(&self, o: &Quat) -> Quat {
        Quat::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }

    pub fn conj(&self) -> Quat {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn dot(&self, o: &Quat) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Sign-minimized chordal distance, √(2 − 2|p·q|).
    ///
    /// Exactly √2 times `op_distance` of the corresponding unitaries, so
    /// nearest-neighbor order agrees between the two metrics.
    pub fn dist(&self, o: &Quat) -> f64 {
        (2.0 - 2.0 * self.dot(o).abs()).max(0.0).sqrt()
    }

    /// Rotate a 3-vector by the SO(3) action of this quaternion.
    pub fn rotate(&self, v: &BlochVector) -> BlochVector {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        BlochVector::new(
            (1.0 - 2.0 * (y * y + z * z)) * v.x
                + 2.0 * (x * y - w * z) * v.y
                + 2.0 * (x * z + w * y) * v.z,
            2.0 * (x * y + w * z) * v.x
                + (1.0 - 2.0 * (x * x + z * z)) * v.y
                + 2.0 * (y * z - w * x) * v.z,
            2.0 * (x * z - w * y) * v.x
                + 2.0 * (y * z + w * x) * v.y
                + (1.0 - 2.0 * (x * x + y * y)) * v.z,
        )
    }

    /// Rotation angle in [0, π] and (unnormalized) axis of the class.
    pub fn angle(&self) -> f64 {
        let v = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        2.0 * v.atan2(self.w.abs())
    }

    pub fn axis(&self) -> Option<BlochVector> {
        let v = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        if v < 1e-12 {
            None
        } else {
            Some(BlochVector::new(self.x / v, self.y / v, self.z / v))
        }
    }

    /// Integer grid cell on a `step`-spaced lattice; used for deduplication.
    pub fn grid_key(&self, step: f64) -> [i64; 4] {
        [
            (self.w / step).round() as i64,
            (self.x / step).round() as i64,
            (self.y / step).round() as i64,
            (self.z / step).round() as i64,
        ]
    }
}

/// R(n̂, θ) = cos(θ/2)·I − i·sin(θ/2)·(n̂·σ⃗). The axis must be unit length.
pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Unitary2> {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if (n - 1.0).abs() > GEOM_TOL {
        return Err(Error::Domain(format!(
            "rotation axis has norm {n}, expected 1 within {GEOM_TOL:e}"
        )));
    }
    let c = (angle / 2.0).cos();
    let s = (angle / 2.0).sin();
    let (nx, ny, nz) = (axis[0], axis[1], axis[2]);
    Ok(Unitary2 {
        m: [
            [Complex64::new(c, -s * nz), Complex64::new(-s * ny, -s * nx)],
            [Complex64::new(s * ny, -s * nx), Complex64::new(c, s * nz)],
        ],
    })
}

/// Rotation about the z axis: diag(e^{−iθ/2}, e^{iθ/2}).
pub fn rotation_z(angle: f64) -> Unitary2 {
    rotation([0.0, 0.0, 1.0], angle).expect("z is a unit axis")
}

/// Global-phase-invariant operator distance √(1 − |tr(U†V)|/2), in [0, 1].
///
/// Zero iff U = e^{iφ}V; equals the sine of half the residual rotation angle.
pub fn op_distance(u: &Unitary2, v: &Unitary2) -> f64 {
    phase_defect(u, v).sqrt()
}

/// The square of `op_distance`: 1 − |tr(U†V)|/2, clamped at zero.
///
/// Near-equal operators should be compared with this quantity: rounding in
/// the trace gets amplified to ~1e-8 by the square root, so `op_distance`
/// itself cannot resolve distances below that, while the defect resolves
/// agreement down to ~1e-15.
pub fn phase_defect(u: &Unitary2, v: &Unitary2) -> f64 {
    let t = u.adjoint().mul(v).trace().norm() / 2.0;
    (1.0 - t).max(0.0)
}

/// Apply a unitary to a state.
pub fn apply(u: &Unitary2, psi: &State2) -> State2 {
    State2 {
        amp: [
            u.m[0][0] * psi.amp[0] + u.m[0][1] * psi.amp[1],
            u.m[1][0] * psi.amp[0] + u.m[1][1] * psi.amp[1],
        ],
    }
}

/// Bloch vector (⟨X⟩, ⟨Y⟩, ⟨Z⟩) of a pure state.
pub fn bloch_of_state(psi: &State2) -> BlochVector {
    let cross = psi.amp[0].conj() * psi.amp[1];
    BlochVector::new(
        2.0 * cross.re,
        2.0 * cross.im,
        psi.amp[0].norm_sqr() - psi.amp[1].norm_sqr(),
    )
}

/// Trace distance between the states with the given Bloch vectors:
/// half the Euclidean distance ‖r⃗ − s⃗‖/2.
pub fn trace_distance(r: &BlochVector, s: &BlochVector) -> f64 {
    r.sub(s).norm() / 2.0
}

/// The SU(2) matrix w·I − i(x·σx + y·σy + z·σz) of a unit quaternion.
pub fn from_quaternion(q: &Quat) -> Unitary2 {
    Unitary2 {
        m: [
            [Complex64::new(q.w, -q.z), Complex64::new(-q.y, -q.x)],
            [Complex64::new(q.y, -q.x), Complex64::new(q.w, q.z)],
        ],
    }
}

/// Phase-stripped unit quaternion of a unitary, with canonical sign.
///
/// `to_quaternion(U) == to_quaternion(e^{iφ}U)` for every φ.
pub fn to_quaternion(u: &Unitary2) -> Quat {
    // Divide out a square root of the determinant to land in SU(2); the
    // leftover ± ambiguity is removed by the canonical sign rule.
    let s = u.det().sqrt();
    let alpha = u.m[0][0] / s;
    let beta = u.m[0][1] / s;
    Quat::new(alpha.re, -beta.im, -beta.re, -alpha.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn z_axis() -> [f64; 3] {
        [0.0, 0.0, 1.0]
    }

    fn s_matrix() -> Unitary2 {
        Unitary2 {
            m: [[ONE, ZERO], [ZERO, Complex64::new(0.0, 1.0)]],
        }
    }

    fn t_matrix() -> Unitary2 {
        Unitary2 {
            m: [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, FRAC_PI_4)]],
        }
    }

    fn random_rotation(rng: &mut ChaCha8Rng) -> Unitary2 {
        let axis = random_axis(rng);
        let angle = rng.gen_range(0.0..2.0 * PI);
        rotation(axis, angle).unwrap()
    }

    fn random_axis(rng: &mut ChaCha8Rng) -> [f64; 3] {
        loop {
            let v: [f64; 3] = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 1e-3 {
                return [v[0] / n, v[1] / n, v[2] / n];
            }
        }
    }

    fn random_state(rng: &mut ChaCha8Rng) -> State2 {
        loop {
            let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            if n > 1e-3 {
                return State2 {
                    amp: [a / n, b / n],
                };
            }
        }
    }

    #[test]
    fn rotation_z_zero_is_identity() {
        let u = rotation(z_axis(), 0.0).unwrap();
        let id = Unitary2::identity();
        for r in 0..2 {
            for c in 0..2 {
                assert!((u.m[r][c] - id.m[r][c]).norm() < UNITARY_TOL);
            }
        }
    }

    #[test]
    fn rotation_z_matches_s_and_t_up_to_phase() {
        assert!(phase_defect(&rotation_z(FRAC_PI_2), &s_matrix()) < 1e-12);
        assert!(phase_defect(&rotation_z(FRAC_PI_4), &t_matrix()) < 1e-12);
    }

    #[test]
    fn rotation_rejects_non_unit_axis() {
        assert!(rotation([0.0, 0.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn op_distance_cases() {
        let id = Unitary2::identity();
        let z = rotation_z(PI); // Z up to phase
        assert_eq!(op_distance(&id, &id), 0.0);
        assert!((op_distance(&id, &z) - 1.0).abs() < 1e-12);

        // Independent arithmetic oracle: |tr(T)|/2 = cos(π/8), so the
        // distance to the identity is √(1 − cos(π/8)).
        let oracle = (1.0 - (PI / 8.0).cos()).sqrt();
        let d = op_distance(&id, &t_matrix());
        assert!((d - oracle).abs() < 1e-12);
        assert!((d - 0.27590).abs() < 1e-4);
    }

    #[test]
    fn apply_cases() {
        let psi = apply(&Unitary2::identity(), &State2::ket0());
        assert!((psi.amp[0] - ONE).norm() < UNITARY_TOL);

        let h = Unitary2 {
            m: [
                [
                    Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                    Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                ],
                [
                    Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                    Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
                ],
            ],
        };
        let plus = apply(&h, &State2::ket0());
        assert!((plus.amp[0] - State2::plus().amp[0]).norm() < UNITARY_TOL);
        assert!((plus.amp[1] - State2::plus().amp[1]).norm() < UNITARY_TOL);

        // 2×2 matrix-multiplication oracle under the fixed sign convention:
        // R_z(θ)|+⟩ has Bloch vector (cos θ, sin θ, 0).
        let rotated = apply(&rotation_z(1.0), &State2::plus());
        let b = bloch_of_state(&rotated);
        assert!((b.x - 1.0f64.cos()).abs() < GEOM_TOL);
        assert!((b.y - 1.0f64.sin()).abs() < GEOM_TOL);
        assert!(b.z.abs() < GEOM_TOL);
    }

    #[test]
    fn bloch_of_state_cases() {
        let b0 = bloch_of_state(&State2::ket0());
        assert!((b0.z - 1.0).abs() < GEOM_TOL && b0.x.abs() < GEOM_TOL && b0.y.abs() < GEOM_TOL);

        let bp = bloch_of_state(&State2::plus());
        assert!((bp.x - 1.0).abs() < GEOM_TOL);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi_i = State2::new(Complex64::new(h, 0.0), Complex64::new(0.0, h)).unwrap();
        let bi = bloch_of_state(&psi_i);
        assert!((bi.y - 1.0).abs() < GEOM_TOL && bi.x.abs() < GEOM_TOL && bi.z.abs() < GEOM_TOL);
    }

    #[test]
    fn trace_distance_cases() {
        let up = BlochVector::new(0.0, 0.0, 1.0);
        let down = BlochVector::new(0.0, 0.0, -1.0);
        let px = BlochVector::new(1.0, 0.0, 0.0);
        assert_eq!(trace_distance(&up, &up), 0.0);
        assert!((trace_distance(&up, &down) - 1.0).abs() < 1e-12);
        assert!((trace_distance(&px, &up) - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn to_quaternion_cases() {
        let qi = to_quaternion(&Unitary2::identity());
        assert!((qi.w - 1.0).abs() < 1e-12);

        let qz = to_quaternion(&rotation_z(PI));
        assert!(qz.w.abs() < 1e-12 && (qz.z - 1.0).abs() < 1e-12);

        // Arithmetic oracle: T is a z rotation by π/4, so its phase-free
        // quaternion is (cos π/8, 0, 0, sin π/8).
        let qt = to_quaternion(&t_matrix());
        assert!((qt.w - (PI / 8.0).cos()).abs() < 1e-12);
        assert!((qt.z - (PI / 8.0).sin()).abs() < 1e-12);
        assert!(qt.x.abs() < 1e-12 && qt.y.abs() < 1e-12);
    }

    #[test]
    fn to_quaternion_is_phase_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let u = random_rotation(&mut rng);
            let phi = rng.gen_range(0.0..2.0 * PI);
            let v = u.scaled(Complex64::from_polar(1.0, phi));
            let (p, q) = (to_quaternion(&u), to_quaternion(&v));
            assert!(p.dist(&q) < 1e-7);
            // With canonical signs the components themselves agree.
            assert!((p.w - q.w).abs() < 1e-9 && (p.z - q.z).abs() < 1e-9);
        }
    }

    #[test]
    fn rotation_inverse_is_identity() {
        // The product is the identity exactly (phase included), so the
        // entries themselves can be checked.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let id = Unitary2::identity();
        for _ in 0..1000 {
            let axis = random_axis(&mut rng);
            let angle = rng.gen_range(-2.0 * PI..2.0 * PI);
            let u = rotation(axis, angle).unwrap();
            let v = rotation(axis, -angle).unwrap();
            let p = u.mul(&v);
            for r in 0..2 {
                for c in 0..2 {
                    assert!((p.m[r][c] - id.m[r][c]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn op_distance_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = random_rotation(&mut rng);
            let b = random_rotation(&mut rng);
            let c = random_rotation(&mut rng);
            assert!(op_distance(&a, &c) <= op_distance(&a, &b) + op_distance(&b, &c) + 1e-9);
        }
    }

    #[test]
    fn op_distance_phase_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let u = random_rotation(&mut rng);
            let v = random_rotation(&mut rng);
            let phi = rng.gen_range(0.0..2.0 * PI);
            let vp = v.scaled(Complex64::from_polar(1.0, phi));
            assert!((op_distance(&u, &v) - op_distance(&u, &vp)).abs() < 1e-12);
        }
    }

    #[test]
    fn quaternion_distance_orders_like_op_distance() {
        // Sorting candidates by either metric must select the same nearest
        // element; the two are related by a constant factor of √2.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pool: Vec<Unitary2> = (0..40).map(|_| random_rotation(&mut rng)).collect();
        let quats: Vec<Quat> = pool.iter().map(to_quaternion).collect();
        for _ in 0..1000 {
            let target = random_rotation(&mut rng);
            let qt = to_quaternion(&target);
            let by_op = (0..pool.len())
                .min_by(|&i, &j| {
                    op_distance(&pool[i], &target).total_cmp(&op_distance(&pool[j], &target))
                })
                .unwrap();
            let by_quat = (0..pool.len())
                .min_by(|&i, &j| quats[i].dist(&qt).total_cmp(&quats[j].dist(&qt)))
                .unwrap();
            assert_eq!(by_op, by_quat);
            let d_op = op_distance(&pool[by_op], &target);
            let d_q = quats[by_quat].dist(&qt);
            assert!((d_q - std::f64::consts::SQRT_2 * d_op).abs() < 1e-9);
        }
    }

    #[test]
    fn trace_distance_matches_fidelity_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let psi = random_state(&mut rng);
            let phi = random_state(&mut rng);
            let lhs = trace_distance(&bloch_of_state(&psi), &bloch_of_state(&phi));
            let overlap = psi.inner(&phi).norm_sqr();
            let rhs = (1.0 - overlap).max(0.0).sqrt();
            assert!((lhs - rhs).abs() < 1e-9, "lhs={lhs} rhs={rhs}");
        }
    }
}
