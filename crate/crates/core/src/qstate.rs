//! Dense state-vector engine for registers of one to three qubits.
//!
//! Amplitudes are stored big-endian over the register: for a register
//! `(q0, q1, q2)` the basis index of `|b0 b1 b2⟩` is `b0·4 + b1·2 + b2`,
//! with `|0⟩` ordered before `|1⟩`. States are immutable; every operation
//! returns a freshly validated vector, so the unit-norm invariant holds
//! after construction and after every unitary.

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::Real;

/// A complex amplitude. Finiteness is enforced whenever a [`StateVector`]
/// is constructed.
pub type Amplitude<T> = Complex<T>;

/// Largest register this engine supports.
pub const MAX_QUBITS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QstateError {
    #[error("register of {0} qubits not supported (1..={MAX_QUBITS})")]
    UnsupportedQubitCount(usize),
    #[error("amplitude vector has length {got}, expected {expected}")]
    InvalidDimension { expected: usize, got: usize },
    #[error("non-finite amplitude in state vector")]
    NonFiniteAmplitude,
    #[error("state not normalized: squared norm deviates from 1 by {deviation:e}")]
    NotNormalized { deviation: f64 },
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("joint distribution requires two distinct qubit indices")]
    DuplicateQubits,
    #[error("operation needs a register of at least {needed} qubits, state has {n_qubits}")]
    RegisterTooSmall { needed: usize, n_qubits: usize },
    #[error("matrix is not unitary: max deviation from identity {deviation:e}")]
    NonUnitary { deviation: f64 },
    #[error("non-finite parameter")]
    NonFiniteParameter,
    #[error("negative duration")]
    NegativeDuration,
    #[error("measurement draw must lie in [0, 1)")]
    DrawOutOfRange,
    #[error("probabilities not a distribution: sum deviates from 1 by {deviation:e}")]
    InvalidDistribution { deviation: f64 },
}

/// Measurement basis for a single qubit.
///
/// `PlusMinus` is the Hadamard basis `|±⟩ = (1/√2)(|0⟩ ± |1⟩)`; its vectors
/// are real and orthonormal, and the change of basis is its own inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Computational,
    PlusMinus,
}

/// 2×2 unitary acting on one qubit. Unitarity (`U†U = I`) is checked at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitUnitary<T> {
    m: [[Amplitude<T>; 2]; 2],
}

impl<T: Real> SingleQubitUnitary<T> {
    pub fn new(m: [[Amplitude<T>; 2]; 2]) -> Result<Self, QstateError> {
        for row in &m {
            for a in row {
                if !a.re.is_finite() || !a.im.is_finite() {
                    return Err(QstateError::NonFiniteAmplitude);
                }
            }
        }
        // U†U, row i / column j.
        let mut deviation = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Amplitude::<T>::zero();
                for row in &m {
                    s += row[i].conj() * row[j];
                }
                let target = if i == j {
                    Amplitude::<T>::one()
                } else {
                    Amplitude::<T>::zero()
                };
                deviation = deviation.max((s - target).norm_sqr().sqrt());
            }
        }
        if deviation > T::ALGEBRA_TOL {
            return Err(QstateError::NonUnitary {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self {
            m: [
                [Amplitude::one(), Amplitude::zero()],
                [Amplitude::zero(), Amplitude::one()],
            ],
        }
    }

    pub fn matrix(&self) -> &[[Amplitude<T>; 2]; 2] {
        &self.m
    }
}

/// Clock evolution over a time step: the diagonal phase unitary
/// `diag(e^{+iω·dt}, e^{−iω·dt})` that advances a nondegenerate qubit's
/// superposition phase.
pub fn clock_evolution<T: Real>(omega: T, dt: T) -> Result<SingleQubitUnitary<T>, QstateError> {
    if !omega.is_finite() || !dt.is_finite() {
        return Err(QstateError::NonFiniteParameter);
    }
    if dt < T::zero() {
        return Err(QstateError::NegativeDuration);
    }
    let phase = omega * dt;
    SingleQubitUnitary::new([
        [Amplitude::from_polar(T::one(), phase), Amplitude::zero()],
        [Amplitude::zero(), Amplitude::from_polar(T::one(), -phase)],
    ])
}

/// Exact four-outcome joint distribution over two measured qubits.
///
/// Cells are ordered `(first, first)`, `(first, second)`, `(second, first)`,
/// `(second, second)` in the chosen basis; in the `PlusMinus` basis the
/// first outcome is `+`, so the fields read `P(+,+)`, `P(+,−)`, `P(−,+)`,
/// `P(−,−)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointProbs<T> {
    pub p_pp: T,
    pub p_pm: T,
    pub p_mp: T,
    pub p_mm: T,
}

impl<T: Real> JointProbs<T> {
    /// Validates that the four cells form a distribution (each in `[0, 1]`
    /// up to tolerance, summing to 1 up to tolerance). Tiny negative cells
    /// from floating-point cancellation are clamped to zero.
    pub fn new(p_pp: T, p_pm: T, p_mp: T, p_mm: T) -> Result<Self, QstateError> {
        let cells = [p_pp, p_pm, p_mp, p_mm];
        let mut sum = T::zero();
        for p in cells {
            if !p.is_finite() || p < -T::ALGEBRA_TOL || p > T::one() + T::ALGEBRA_TOL {
                return Err(QstateError::InvalidDistribution {
                    deviation: p.to_f64().unwrap_or(f64::NAN),
                });
            }
            sum += p;
        }
        let deviation = (sum - T::one()).abs();
        if deviation > T::ALGEBRA_TOL {
            return Err(QstateError::InvalidDistribution {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        let clamp = |p: T| p.max(T::zero()).min(T::one());
        Ok(Self {
            p_pp: clamp(p_pp),
            p_pm: clamp(p_pm),
            p_mp: clamp(p_mp),
            p_mm: clamp(p_mm),
        })
    }

    pub fn as_array(&self) -> [T; 4] {
        [self.p_pp, self.p_pm, self.p_mp, self.p_mm]
    }

    /// Probability that the two outcomes agree.
    pub fn p_same(&self) -> T {
        self.p_pp + self.p_mm
    }

    /// Marginal of the first qubit: `(P(first outcome), P(second outcome))`.
    pub fn marginal_first(&self) -> (T, T) {
        (self.p_pp + self.p_pm, self.p_mp + self.p_mm)
    }

    /// Marginal of the second qubit.
    pub fn marginal_second(&self) -> (T, T) {
        (self.p_pp + self.p_mp, self.p_pm + self.p_mm)
    }

    /// Total-variation distance: half the L1 distance between the cells.
    pub fn total_variation(&self, other: &Self) -> T {
        let half = T::of(0.5);
        let a = self.as_array();
        let b = other.as_array();
        let mut s = T::zero();
        for i in 0..4 {
            s += (a[i] - b[i]).abs();
        }
        half * s
    }
}

/// Result of a single-qubit projective measurement.
#[derive(Debug, Clone)]
pub struct Measurement<T> {
    /// 0 selects the first basis vector (`|0⟩` or `|+⟩`), 1 the second.
    pub outcome: u8,
    /// Renormalized post-measurement state.
    pub collapsed: StateVector<T>,
    /// Born probability of the outcome that occurred.
    pub prob: T,
}

/// Normalized pure state of a small qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amps: Vec<Amplitude<T>>,
}

impl<T: Real> StateVector<T> {
    /// Build a state from raw amplitudes, enforcing the register size,
    /// finiteness, and unit norm.
    pub fn new(n_qubits: usize, amps: Vec<Amplitude<T>>) -> Result<Self, QstateError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QstateError::UnsupportedQubitCount(n_qubits));
        }
        let dim = 1 << n_qubits;
        if amps.len() != dim {
            return Err(QstateError::InvalidDimension {
                expected: dim,
                got: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QstateError::NonFiniteAmplitude);
        }
        let state = Self { n_qubits, amps };
        let deviation = (state.norm_sqr() - T::one()).abs();
        if deviation > T::ALGEBRA_TOL {
            return Err(QstateError::NotNormalized {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(state)
    }

    /// Computational basis state `|index⟩` of an `n_qubits` register.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self, QstateError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QstateError::UnsupportedQubitCount(n_qubits));
        }
        let dim = 1 << n_qubits;
        if index >= dim {
            return Err(QstateError::InvalidDimension {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![Amplitude::zero(); dim];
        amps[index] = Amplitude::one();
        Ok(Self { n_qubits, amps })
    }

    /// Single-qubit `|+⟩ = (1/√2)(|0⟩ + |1⟩)`.
    pub fn plus() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self {
            n_qubits: 1,
            amps: vec![Amplitude::new(h, T::zero()), Amplitude::new(h, T::zero())],
        }
    }

    /// The two-qubit singlet `(1/√2)(|01⟩ − |10⟩)`, anticorrelated in every
    /// basis.
    pub fn singlet() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self {
            n_qubits: 2,
            amps: vec![
                Amplitude::zero(),
                Amplitude::new(h, T::zero()),
                Amplitude::new(-h, T::zero()),
                Amplitude::zero(),
            ],
        }
    }

    /// Tensor product `self ⊗ rhs`, with `self` occupying the more
    /// significant register slots.
    pub fn tensor(&self, rhs: &Self) -> Result<Self, QstateError> {
        let n = self.n_qubits + rhs.n_qubits;
        if n > MAX_QUBITS {
            return Err(QstateError::UnsupportedQubitCount(n));
        }
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &rhs.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amps(&self) -> &[Amplitude<T>] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Amplitude<T> {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), QstateError> {
        if qubit >= self.n_qubits {
            return Err(QstateError::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Bit mask selecting `qubit` in the big-endian amplitude index.
    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Apply a single-qubit unitary to the addressed tensor factor.
    pub fn apply_single(
        &self,
        qubit: usize,
        u: &SingleQubitUnitary<T>,
    ) -> Result<Self, QstateError> {
        self.check_qubit(qubit)?;
        let mask = self.mask(qubit);
        let m = &u.m;
        let mut amps = self.amps.clone();
        for idx in 0..amps.len() {
            if idx & mask == 0 {
                let a0 = self.amps[idx];
                let a1 = self.amps[idx | mask];
                amps[idx] = m[0][0] * a0 + m[0][1] * a1;
                amps[idx | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Self::new(self.n_qubits, amps)
    }

    /// The proxy interaction: in the `|±⟩` basis of both qubits, flip the
    /// first register qubit (the proxy) conditioned on the second being
    /// `|−⟩`, leaving the second unchanged:
    ///
    /// `(α|+⟩ + β|−⟩) ⊗ |±⟩  →  (α|±⟩ + β|∓⟩) ⊗ |±⟩`
    ///
    /// Written in the computational basis this is exactly a controlled-NOT
    /// with the proxy as control and the clock qubit as target, which is how
    /// it is applied here.
    pub fn proxy_interaction(&self) -> Result<Self, QstateError> {
        if self.n_qubits < 2 {
            return Err(QstateError::RegisterTooSmall {
                needed: 2,
                n_qubits: self.n_qubits,
            });
        }
        let c_mask = self.mask(0);
        let a_mask = self.mask(1);
        let mut amps = self.amps.clone();
        for idx in 0..amps.len() {
            if idx & c_mask != 0 && idx & a_mask == 0 {
                amps.swap(idx, idx | a_mask);
            }
        }
        Self::new(self.n_qubits, amps)
    }

    /// Amplitudes re-expressed with `qubit` in the given basis. For
    /// `PlusMinus` this applies the (self-inverse) Hadamard change of basis
    /// to that tensor factor.
    fn in_basis(&self, qubit: usize, basis: Basis) -> Vec<Amplitude<T>> {
        match basis {
            Basis::Computational => self.amps.clone(),
            Basis::PlusMinus => {
                let mask = self.mask(qubit);
                let h = T::FRAC_1_SQRT_2();
                let mut amps = self.amps.clone();
                for idx in 0..amps.len() {
                    if idx & mask == 0 {
                        let a0 = self.amps[idx];
                        let a1 = self.amps[idx | mask];
                        amps[idx] = (a0 + a1).scale(h);
                        amps[idx | mask] = (a0 - a1).scale(h);
                    }
                }
                amps
            }
        }
    }

    /// Born probabilities `(P(first), P(second))` of measuring `qubit` in
    /// `basis`; the pair sums to one up to tolerance.
    pub fn born_probs(&self, qubit: usize, basis: Basis) -> Result<(T, T), QstateError> {
        self.check_qubit(qubit)?;
        let amps = self.in_basis(qubit, basis);
        let mask = self.mask(qubit);
        let mut p_first = T::zero();
        let mut p_second = T::zero();
        for (idx, a) in amps.iter().enumerate() {
            if idx & mask == 0 {
                p_first += a.norm_sqr();
            } else {
                p_second += a.norm_sqr();
            }
        }
        Ok((p_first, p_second))
    }

    /// Projective measurement of one qubit driven by an external uniform
    /// draw in `[0, 1)`.
    ///
    /// The first outcome is selected iff `draw < P(first)`, so an outcome of
    /// probability zero can never fire. The collapsed state is the
    /// renormalized projection; amplitudes left below the flush tolerance by
    /// the projection are zeroed.
    pub fn measure(
        &self,
        qubit: usize,
        basis: Basis,
        draw: T,
    ) -> Result<Measurement<T>, QstateError> {
        if !(draw >= T::zero() && draw < T::one()) {
            return Err(QstateError::DrawOutOfRange);
        }
        let (p_first, p_second) = self.born_probs(qubit, basis)?;
        let outcome: u8 = if draw < p_first { 0 } else { 1 };
        let prob = if outcome == 0 { p_first } else { p_second };

        let mut amps = self.in_basis(qubit, basis);
        let mask = self.mask(qubit);
        let keep_set = outcome == 1;
        let scale = prob.sqrt().recip();
        for (idx, a) in amps.iter_mut().enumerate() {
            if (idx & mask != 0) == keep_set {
                *a = a.scale(scale);
            } else {
                *a = Amplitude::zero();
            }
        }
        // Back to the computational basis (the PlusMinus transform is its
        // own inverse).
        let mut collapsed = Self {
            n_qubits: self.n_qubits,
            amps,
        }
        .in_basis(qubit, basis);
        for a in collapsed.iter_mut() {
            if a.norm_sqr() < T::FLUSH_TOL * T::FLUSH_TOL {
                *a = Amplitude::zero();
            }
        }
        Ok(Measurement {
            outcome,
            collapsed: Self::new(self.n_qubits, collapsed)?,
            prob,
        })
    }

    /// Exact joint outcome distribution of measuring `qubit1` then `qubit2`
    /// in the same basis, with any remaining qubit traced out.
    pub fn joint_distribution(
        &self,
        qubit1: usize,
        qubit2: usize,
        basis: Basis,
    ) -> Result<JointProbs<T>, QstateError> {
        self.check_qubit(qubit1)?;
        self.check_qubit(qubit2)?;
        if qubit1 == qubit2 {
            return Err(QstateError::DuplicateQubits);
        }
        let rotated = Self {
            n_qubits: self.n_qubits,
            amps: self.in_basis(qubit1, basis),
        };
        let amps = rotated.in_basis(qubit2, basis);
        let m1 = self.mask(qubit1);
        let m2 = self.mask(qubit2);
        let mut cells = [T::zero(); 4];
        for (idx, a) in amps.iter().enumerate() {
            let o1 = usize::from(idx & m1 != 0);
            let o2 = usize::from(idx & m2 != 0);
            cells[o1 * 2 + o2] += a.norm_sqr();
        }
        JointProbs::new(cells[0], cells[1], cells[2], cells[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = StateVector<f64>;
    const TOL: f64 = 1e-12;

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < TOL, "{a} vs {b}");
    }

    fn assert_amp(a: Amplitude<f64>, re: f64, im: f64) {
        assert!((a.re - re).abs() < TOL && (a.im - im).abs() < TOL, "{a}");
    }

    #[test]
    fn singlet_amplitudes() {
        let s = S::singlet();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_amp(s.amp(0), 0.0, 0.0);
        assert_amp(s.amp(1), h, 0.0);
        assert_amp(s.amp(2), -h, 0.0);
        assert_amp(s.amp(3), 0.0, 0.0);
        assert_close(s.norm_sqr(), 1.0);
    }

    #[test]
    fn clock_evolution_zero_time_is_identity() {
        let u = clock_evolution(1.7, 0.0).unwrap();
        assert_eq!(u, SingleQubitUnitary::identity());
    }

    #[test]
    fn clock_evolution_rejects_bad_inputs() {
        assert!(matches!(
            clock_evolution(f64::NAN, 1.0),
            Err(QstateError::NonFiniteParameter)
        ));
        assert!(matches!(
            clock_evolution(1.0, -0.5),
            Err(QstateError::NegativeDuration)
        ));
    }

    #[test]
    fn evolved_singlet_carries_opposite_phases() {
        // (1/√2)(e^{iωt}|01⟩ − e^{−iωt}|10⟩) after evolving qubit A.
        let omega = 0.7;
        let t = 2.3;
        let s = S::singlet()
            .apply_single(0, &clock_evolution(omega, t).unwrap())
            .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_amp(s.amp(1), h * (omega * t).cos(), h * (omega * t).sin());
        assert_amp(s.amp(2), -h * (omega * t).cos(), h * (omega * t).sin());
        assert_amp(s.amp(0), 0.0, 0.0);
        assert_amp(s.amp(3), 0.0, 0.0);
    }

    #[test]
    fn half_period_evolution_is_global_phase() {
        // diag(e^{iπ}, e^{−iπ}) = −I: amplitudes negate, probabilities don't move.
        let s = S::singlet();
        let evolved = s.apply_single(0, &clock_evolution(1.0, std::f64::consts::PI).unwrap()).unwrap();
        for i in 0..4 {
            assert_amp(evolved.amp(i), -s.amp(i).re, -s.amp(i).im);
        }
        for basis in [Basis::Computational, Basis::PlusMinus] {
            for q in 0..2 {
                let (p0, _) = s.born_probs(q, basis).unwrap();
                let (q0, _) = evolved.born_probs(q, basis).unwrap();
                assert_close(p0, q0);
            }
        }
    }

    #[test]
    fn applying_identity_preserves_state() {
        let s = S::singlet();
        let out = s.apply_single(1, &SingleQubitUnitary::identity()).unwrap();
        assert_eq!(s, out);
    }

    #[test]
    fn evolution_composes_over_time() {
        let omega = 1.3;
        let t = 0.9;
        let half = clock_evolution(omega, t / 2.0).unwrap();
        let full = clock_evolution(omega, t).unwrap();
        let s = S::plus();
        let twice = s.apply_single(0, &half).unwrap().apply_single(0, &half).unwrap();
        let once = s.apply_single(0, &full).unwrap();
        for i in 0..2 {
            assert!((twice.amp(i) - once.amp(i)).norm_sqr().sqrt() < TOL);
        }
    }

    #[test]
    fn apply_single_rejects_bad_index() {
        let s = S::plus();
        assert!(matches!(
            s.apply_single(1, &SingleQubitUnitary::identity()),
            Err(QstateError::QubitOutOfRange { .. })
        ));
    }

    /// A 2-qubit state |b0 b1⟩ with each factor drawn from the ± basis.
    fn pm_product(first_minus: bool, second_minus: bool) -> S {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let one_q = |minus: bool| {
            S::new(
                1,
                vec![
                    Amplitude::new(h, 0.0),
                    Amplitude::new(if minus { -h } else { h }, 0.0),
                ],
            )
            .unwrap()
        };
        one_q(first_minus).tensor(&one_q(second_minus)).unwrap()
    }

    #[test]
    fn proxy_fixes_plus_and_flips_on_minus() {
        // |+⟩_C |+⟩_A is left alone; |+⟩_C |−⟩_A becomes |−⟩_C |−⟩_A.
        let unchanged = pm_product(false, false).proxy_interaction().unwrap();
        assert_eq!(unchanged, pm_product(false, false));

        let flipped = pm_product(false, true).proxy_interaction().unwrap();
        let expected = pm_product(true, true);
        for i in 0..4 {
            assert!((flipped.amp(i) - expected.amp(i)).norm_sqr().sqrt() < TOL);
        }
    }

    #[test]
    fn proxy_matrix_is_unitary() {
        // Assemble the 4×4 matrix column by column from basis-state images.
        let mut u = [[Amplitude::new(0.0, 0.0); 4]; 4];
        for col in 0..4 {
            let image = S::basis_state(2, col).unwrap().proxy_interaction().unwrap();
            for (row, entry) in u.iter_mut().enumerate() {
                entry[col] = image.amp(row);
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let mut s = Amplitude::new(0.0, 0.0);
                for row in &u {
                    s += row[i].conj() * row[j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((s - Amplitude::new(target, 0.0)).norm_sqr().sqrt() < TOL);
            }
        }
    }

    #[test]
    fn proxy_needs_two_qubits() {
        assert!(matches!(
            S::plus().proxy_interaction(),
            Err(QstateError::RegisterTooSmall { .. })
        ));
    }

    #[test]
    fn born_probs_eigenstate_and_symmetric_cases() {
        let plus = S::plus();
        let (p, m) = plus.born_probs(0, Basis::PlusMinus).unwrap();
        assert_close(p, 1.0);
        assert_close(m, 0.0);

        let zero = S::basis_state(1, 0).unwrap();
        let (p, m) = zero.born_probs(0, Basis::PlusMinus).unwrap();
        assert_close(p, 0.5);
        assert_close(m, 0.5);
    }

    #[test]
    fn evolved_singlet_is_unbiased_in_pm_basis() {
        // Both conditional branches of the evolved pair state carry weight 1/2
        // at every time.
        for k in 0..20 {
            let t = 0.37 * k as f64;
            let s = S::singlet()
                .apply_single(0, &clock_evolution(1.0, t).unwrap())
                .unwrap();
            let (p, m) = s.born_probs(0, Basis::PlusMinus).unwrap();
            assert_close(p, 0.5);
            assert_close(m, 0.5);
        }
    }

    #[test]
    fn measure_eigenstate_is_certain() {
        for draw in [0.0, 0.3, 0.999_999] {
            let r = S::plus().measure(0, Basis::PlusMinus, draw).unwrap();
            assert_eq!(r.outcome, 0);
            assert_close(r.prob, 1.0);
            let (p, _) = r.collapsed.born_probs(0, Basis::PlusMinus).unwrap();
            assert_close(p, 1.0);
        }
    }

    #[test]
    fn measure_singlet_collapses_partner() {
        // In the ± basis the singlet reads (1/√2)(|−+⟩ − |+−⟩): a + on A
        // forces − on B.
        let r = S::singlet().measure(0, Basis::PlusMinus, 0.3).unwrap();
        assert_eq!(r.outcome, 0);
        assert_close(r.prob, 0.5);
        let (a_plus, _) = r.collapsed.born_probs(0, Basis::PlusMinus).unwrap();
        let (b_plus, b_minus) = r.collapsed.born_probs(1, Basis::PlusMinus).unwrap();
        assert_close(a_plus, 1.0);
        assert_close(b_plus, 0.0);
        assert_close(b_minus, 1.0);
    }

    #[test]
    fn measure_rejects_bad_draw() {
        assert!(matches!(
            S::plus().measure(0, Basis::PlusMinus, 1.0),
            Err(QstateError::DrawOutOfRange)
        ));
        assert!(matches!(
            S::plus().measure(0, Basis::PlusMinus, -0.1),
            Err(QstateError::DrawOutOfRange)
        ));
    }

    #[test]
    fn joint_distribution_of_singlet_is_anticorrelated() {
        let j = S::singlet()
            .joint_distribution(0, 1, Basis::PlusMinus)
            .unwrap();
        assert_close(j.p_pp, 0.0);
        assert_close(j.p_pm, 0.5);
        assert_close(j.p_mp, 0.5);
        assert_close(j.p_mm, 0.0);
    }

    #[test]
    fn joint_distribution_of_product_state() {
        let j = pm_product(false, false)
            .joint_distribution(0, 1, Basis::PlusMinus)
            .unwrap();
        assert_close(j.p_pp, 1.0);
        assert_close(j.p_pm + j.p_mp + j.p_mm, 0.0);
    }

    #[test]
    fn joint_distribution_rejects_equal_indices() {
        assert!(matches!(
            S::singlet().joint_distribution(1, 1, Basis::PlusMinus),
            Err(QstateError::DuplicateQubits)
        ));
    }

    #[test]
    fn pm_transform_is_involutive() {
        let s = S::singlet()
            .apply_single(0, &clock_evolution(0.9, 1.4).unwrap())
            .unwrap();
        let once = S {
            n_qubits: 2,
            amps: s.in_basis(1, Basis::PlusMinus),
        };
        let twice = once.in_basis(1, Basis::PlusMinus);
        for (i, amp) in twice.iter().enumerate() {
            assert!((amp - s.amp(i)).norm_sqr().sqrt() < TOL);
        }
    }

    #[test]
    fn born_probs_complete_over_reachable_states() {
        for k in 0..30 {
            let t = 0.21 * k as f64;
            let s = S::plus()
                .tensor(&S::singlet())
                .unwrap()
                .apply_single(1, &clock_evolution(1.1, t).unwrap())
                .unwrap()
                .proxy_interaction()
                .unwrap();
            for q in 0..3 {
                for basis in [Basis::Computational, Basis::PlusMinus] {
                    let (p, m) = s.born_probs(q, basis).unwrap();
                    assert_close(p + m, 1.0);
                }
            }
        }
    }

    #[test]
    fn rejects_denormalized_or_nonfinite_input() {
        let bad = S::new(1, vec![Amplitude::new(0.9, 0.0), Amplitude::new(0.0, 0.0)]);
        assert!(matches!(bad, Err(QstateError::NotNormalized { .. })));
        let nan = S::new(
            1,
            vec![Amplitude::new(f64::NAN, 0.0), Amplitude::new(0.0, 0.0)],
        );
        assert!(matches!(nan, Err(QstateError::NonFiniteAmplitude)));
    }

    #[test]
    fn works_in_single_precision() {
        let s = StateVector::<f32>::singlet()
            .apply_single(0, &clock_evolution(1.0f32, 0.8).unwrap())
            .unwrap();
        let (p, m) = s.born_probs(0, Basis::PlusMinus).unwrap();
        assert!((p - 0.5).abs() < f32::ALGEBRA_TOL);
        assert!((p + m - 1.0).abs() < f32::ALGEBRA_TOL);
    }
}
