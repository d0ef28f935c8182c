//! Numerical thresholds shared by every module.
//!
//! Algorithms read their guards from [`Tolerances::DEFAULT`]; nothing else in
//! the crate hard-codes a tolerance.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Entrywise antisymmetry defect allowed for a skew matrix.
    pub skew: f64,
    /// Frobenius defect of `RᵀR − I` and `|det R − 1|` for a rotation.
    pub rotation: f64,
    /// Norm defect allowed for quaternions and sphere points.
    pub unit_norm: f64,
    /// Below this norm `normalize` reports the origin.
    pub origin: f64,
    /// Rodrigues coefficients switch to their Taylor series below this angle.
    pub small_angle: f64,
    /// `log` switches to the diagonal axis extraction when `tr R ≤ −1 + this`.
    pub near_pi_trace: f64,
    /// Gram-Schmidt rejects frames whose projected second vector is shorter.
    pub degenerate_frame: f64,
    /// Singular-set margin for metric projection uniqueness.
    pub projection_unique: f64,
    /// Jacobi sweep cap and convergence threshold for the 3x3 symmetric eigensolver.
    pub jacobi_max_sweeps: usize,
    pub jacobi_off_diagonal: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    /// Largest geodesic step for which the quaternion lift is unambiguous.
    pub lift_max_step: f64,
    /// Head inputs with a norm below this are treated as singular during training.
    pub head_singular: f64,
    /// Loop endpoints closer than this count as the same point.
    pub loop_closure: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        skew: 1e-12,
        rotation: 1e-9,
        unit_norm: 1e-12,
        origin: 1e-300,
        small_angle: 1e-4,
        near_pi_trace: 1e-9,
        degenerate_frame: 1e-9,
        projection_unique: 1e-9,
        jacobi_max_sweeps: 30,
        jacobi_off_diagonal: 1e-14,
        fd_step: 1e-6,
        lift_max_step: 0.5,
        head_singular: 1e-7,
        loop_closure: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
