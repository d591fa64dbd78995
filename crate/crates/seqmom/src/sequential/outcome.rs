use std::fmt;

/// A single dichotomic outcome, `+1` or `−1`.
///
/// The global convention, used by every module: `+1` corresponds to the
/// computational-basis state `|0⟩` (σ_z eigenvalue +1) and `−1` to `|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Basis-bit encoding: `Plus ↔ 0`, `Minus ↔ 1`.
    pub fn bit(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Sign {
        if bit & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// An ordered tuple of ±1 outcomes, one per measured variable.
///
/// Tuples are enumerated with the first variable as the most significant
/// position and `+1` before `−1`, so index 0 is `(+1,…,+1)` and index
/// `2^k − 1` is `(−1,…,−1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutcomeTuple {
    signs: Vec<Sign>,
}

impl OutcomeTuple {
    pub fn new(signs: Vec<Sign>) -> Self {
        Self { signs }
    }

    /// The tuple at the given position in enumeration order.
    pub fn from_index(k: usize, index: usize) -> Self {
        assert!(index < (1 << k), "outcome index out of range");
        let signs = (0..k)
            .map(|j| Sign::from_bit((index >> (k - 1 - j)) & 1))
            .collect();
        Self { signs }
    }

    /// Position of this tuple in enumeration order.
    pub fn index(&self) -> usize {
        self.signs
            .iter()
            .fold(0usize, |acc, s| (acc << 1) | s.bit())
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Product of all entries, `∏ x_i ∈ {+1, −1}`.
    pub fn product(&self) -> f64 {
        self.signs.iter().map(|s| s.value()).product()
    }

    /// All `2^k` tuples in enumeration order.
    pub fn enumerate(k: usize) -> impl Iterator<Item = OutcomeTuple> {
        (0..(1usize << k)).map(move |i| OutcomeTuple::from_index(k, i))
    }
}

impl fmt::Display for OutcomeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, s) in self.signs.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Sums `weights` (indexed in enumeration order over `k` variables) over all
/// variables not listed in `keep`; `keep` holds 0-based positions, ascending.
pub(crate) fn marginalize_weights(k: usize, weights: &[f64], keep: &[usize]) -> Vec<f64> {
    let kept = keep.len();
    let mut out = vec![0.0; 1 << kept];
    for (idx, &w) in weights.iter().enumerate() {
        let mut target = 0usize;
        for (pos, &var) in keep.iter().enumerate() {
            let bit = (idx >> (k - 1 - var)) & 1;
            target |= bit << (kept - 1 - pos);
        }
        out[target] += w;
    }
    out
}
