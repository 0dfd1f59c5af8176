//! Dense statevector engine.
//!
//! Qubit `j` is bit `j` of the amplitude index (little-endian), so the
//! amplitude of `|b_{n-1} ... b_1 b_0>` lives at `sum_j b_j 2^j`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest supported register; 2^24 amplitudes is 256 MiB.
pub const MAX_QUBITS: usize = 24;

const NORM_TOLERANCE: f64 = 1e-10;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    /// Wire digit: X=0, Y=1, Z=2.
    pub fn trit(self) -> u8 {
        match self {
            Pauli::X => 0,
            Pauli::Y => 1,
            Pauli::Z => 2,
        }
    }

    pub fn from_trit(trit: u8) -> Option<Self> {
        match trit {
            0 => Some(Pauli::X),
            1 => Some(Pauli::Y),
            2 => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::ALL[rng.gen_range(0..3)]
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::InvalidObservable("Pauli letter must be X, Y or Z")),
        }
    }
}

/// Weight-limited Pauli string, stored sparsely as `(qubit, letter)` pairs
/// sorted by qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliObservable {
    n: usize,
    terms: Vec<(usize, Pauli)>,
}

impl PauliObservable {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut terms: Vec<(usize, Pauli)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Err(Error::InvalidObservable("observable needs at least one factor"));
        }
        terms.sort_unstable_by_key(|&(q, _)| q);
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidObservable("qubit listed twice"));
        }
        if terms.last().is_some_and(|&(q, _)| q >= n) {
            return Err(Error::InvalidObservable("qubit index out of range"));
        }
        Ok(Self { n, terms })
    }

    /// As [`PauliObservable::new`], additionally enforcing `weight <= max_weight`.
    pub fn with_max_weight(
        n: usize,
        terms: impl IntoIterator<Item = (usize, Pauli)>,
        max_weight: usize,
    ) -> Result<Self> {
        let obs = Self::new(n, terms)?;
        if obs.weight() > max_weight {
            return Err(Error::InvalidObservable("weight exceeds the configured maximum"));
        }
        Ok(obs)
    }

    /// Parses a dense label such as `"IXZI"`, where character `j` acts on qubit `j`.
    pub fn from_label(label: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut n = 0;
        for (q, c) in label.chars().enumerate() {
            n += 1;
            if c == 'I' || c == 'i' {
                continue;
            }
            terms.push((q, Pauli::try_from(c)?));
        }
        Self::new(n, terms)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(usize, Pauli)] {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|&(q, _)| q)
    }
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut it = self.terms.iter().peekable();
        for q in 0..self.n {
            match it.peek() {
                Some(&&(tq, p)) if tq == q => {
                    it.next();
                    write!(f, "{p}")?;
                }
                _ => write!(f, "I")?,
            }
        }
        Ok(())
    }
}

/// One Pauli measurement basis letter per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisString {
    letters: Vec<Pauli>,
}

impl BasisString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters }
    }

    pub fn uniform(n: usize, letter: Pauli) -> Self {
        Self { letters: vec![letter; n] }
    }

    /// Letters drawn i.i.d. uniformly from {X, Y, Z}.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self { letters: (0..n).map(|_| Pauli::random(rng)).collect() }
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }
}

impl fmt::Display for BasisString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|p| write!(f, "{p}"))
    }
}

/// Deterministic fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedState {
    AllZero,
    Ghz,
    PlusAll,
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all_zero" => Ok(NamedState::AllZero),
            "ghz" => Ok(NamedState::Ghz),
            "plus_all" => Ok(NamedState::PlusAll),
            other => Err(Error::UnknownState(other.into())),
        }
    }
}

/// Normalized pure state on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

fn check_qubits(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::QubitCount(n))
    }
}

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    // Box-Muller; 1 - u keeps the logarithm finite.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = libm::sqrt(-2.0 * libm::log(u1));
    let theta = 2.0 * core::f64::consts::PI * u2;
    (r * libm::cos(theta), r * libm::sin(theta))
}

impl StateVector {
    /// Validates length (power of two) and normalization.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let n = len.trailing_zeros() as usize;
        check_qubits(n)?;
        let norm: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n, amplitudes })
    }

    /// Normalizes `amplitudes`; returns `None` for the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Option<Self>> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let n = len.trailing_zeros() as usize;
        check_qubits(n)?;
        let norm = libm::sqrt(amplitudes.iter().map(Complex64::norm_sqr).sum());
        if norm == 0.0 || !norm.is_finite() {
            return Ok(None);
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Some(Self { n, amplitudes }))
    }

    /// Haar-random pure state from normalized i.i.d. complex Gaussians.
    pub fn haar_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_qubits(n)?;
        let raw: Vec<Complex64> = (0..1usize << n)
            .map(|_| {
                let (re, im) = standard_normal(rng);
                Complex64::new(re, im)
            })
            .collect();
        // A zero draw has probability zero.
        Ok(Self::normalized(raw)?.expect("gaussian vector is nonzero"))
    }

    pub fn haar_random_seeded(n: usize, seed: u64) -> Result<Self> {
        Self::haar_random(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn named(kind: NamedState, n: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        match kind {
            NamedState::AllZero => amplitudes[0] = Complex64::new(1.0, 0.0),
            NamedState::Ghz => {
                let h = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
                amplitudes[0] = h;
                amplitudes[dim - 1] = h;
            }
            NamedState::PlusAll => {
                let a = Complex64::new(1.0 / libm::sqrt(dim as f64), 0.0);
                amplitudes.iter_mut().for_each(|x| *x = a);
            }
        }
        Ok(Self { n, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: other.n });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        self.inner(other).map(|c| c.norm_sqr())
    }

    /// Exact `<psi|P|psi>` for a Pauli string.
    pub fn expectation(&self, obs: &PauliObservable) -> Result<f64> {
        if obs.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: obs.num_qubits() });
        }
        // (P psi)[k] = i^{#Y} (-1)^{popcount((k ^ x) & z)} psi[k ^ x]
        let (mut xmask, mut zmask, mut ycount) = (0usize, 0usize, 0u32);
        for &(q, p) in obs.terms() {
            match p {
                Pauli::X => xmask |= 1 << q,
                Pauli::Y => {
                    xmask |= 1 << q;
                    zmask |= 1 << q;
                    ycount += 1;
                }
                Pauli::Z => zmask |= 1 << q,
            }
        }
        let acc: Complex64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let src = k ^ xmask;
                let v = a.conj() * self.amplitudes[src];
                if (src & zmask).count_ones() % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .sum();
        let phase = match ycount % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        Ok((phase * acc).re)
    }

    /// Copy of the state after the per-qubit basis change that maps a
    /// measurement of `basis` onto the computational basis (Z: I, X: H, Y: H S^dagger).
    pub fn rotated_to_basis(&self, basis: &BasisString) -> Result<StateVector> {
        let mut rotated = self.clone();
        rotated.rotate_in_place(basis)?;
        Ok(rotated)
    }

    fn rotate_in_place(&mut self, basis: &BasisString) -> Result<()> {
        if basis.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: basis.num_qubits() });
        }
        let h = core::f64::consts::FRAC_1_SQRT_2;
        for (q, &letter) in basis.letters().iter().enumerate() {
            let stride = 1usize << q;
            match letter {
                Pauli::Z => {}
                Pauli::X => {
                    for_each_pair(&mut self.amplitudes, stride, |a0, a1| {
                        ((a0 + a1) * h, (a0 - a1) * h)
                    });
                }
                Pauli::Y => {
                    // H S^dagger = [[1, -i], [1, i]] / sqrt 2
                    let i = Complex64::new(0.0, 1.0);
                    for_each_pair(&mut self.amplitudes, stride, |a0, a1| {
                        ((a0 - i * a1) * h, (a0 + i * a1) * h)
                    });
                }
            }
        }
        Ok(())
    }

    /// Measures every qubit in the given Pauli basis and returns the
    /// computational-basis outcome bits, qubit 0 first.
    pub fn sample_in_basis<R: Rng + ?Sized>(
        &self,
        basis: &BasisString,
        rng: &mut R,
    ) -> Result<Vec<u8>> {
        let rotated = self.rotated_to_basis(basis)?;
        let index = rotated.sample_index(rng);
        Ok((0..self.n).map(|q| ((index >> q) & 1) as u8).collect())
    }

    fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut cumulative = 0.0;
        let mut last_nonzero = 0;
        for (k, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = k;
            }
            cumulative += p;
            if u < cumulative {
                return k;
            }
        }
        // Rounding left u above the accumulated mass.
        last_nonzero
    }
}

fn for_each_pair(
    amps: &mut [Complex64],
    stride: usize,
    f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64),
) {
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (b0, b1) = f(*a0, *a1);
            *a0 = b0;
            *a1 = b1;
        }
    }
}

/// Maps outcome bits to Z eigenvalues, `b -> (-1)^b`.
pub fn outcome_eigenvalues(bits: &[u8]) -> Vec<i8> {
    bits.iter().map(|&b| if b & 1 == 0 { 1 } else { -1 }).collect()
}
