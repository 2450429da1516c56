use super::sets::{MacroState, PropSet};

/// An ultimately periodic word `stem . period^omega`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso<T> {
    pub stem: Vec<T>,
    pub period: Vec<T>,
}

/// Ultimately periodic macro-path.
pub type MacroLasso = Lasso<MacroState>;
/// Ultimately periodic trace.
pub type TraceLasso = Lasso<PropSet>;
/// Ultimately periodic path, as state indices.
pub type PathLasso = Lasso<u32>;

impl<T: Copy + Eq> Lasso<T> {
    pub fn new(stem: Vec<T>, period: Vec<T>) -> Self {
        assert!(!period.is_empty(), "lasso period must be nonempty");
        Lasso { stem, period }
    }

    /// A purely periodic word.
    pub fn periodic(period: Vec<T>) -> Self {
        Lasso::new(Vec::new(), period)
    }

    /// Letter at absolute position `i`.
    pub fn at(&self, i: usize) -> T {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.period[(i - self.stem.len()) % self.period.len()]
        }
    }

    /// Number of distinct positions: stem length plus period length.
    pub fn total_len(&self) -> usize {
        self.stem.len() + self.period.len()
    }

    /// Successor of a position in `0..total_len()`, wrapping the period.
    pub fn next_pos(&self, pos: usize) -> usize {
        if pos + 1 < self.total_len() {
            pos + 1
        } else {
            self.stem.len()
        }
    }

    /// The suffix word from position `i`, as its own lasso.
    pub fn suffix(&self, i: usize) -> Self {
        if i <= self.stem.len() {
            Lasso::new(self.stem[i..].to_vec(), self.period.clone())
        } else {
            let k = (i - self.stem.len()) % self.period.len();
            let mut period = self.period[k..].to_vec();
            period.extend_from_slice(&self.period[..k]);
            Lasso::new(Vec::new(), period)
        }
    }

    pub fn unroll(&self, n: usize) -> Vec<T> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// The unique minimal representation of the denoted word: shortest stem,
    /// then primitive period.
    pub fn canonical(&self) -> Self {
        let mut stem = self.stem.clone();
        let mut period = self.period.clone();
        while let Some(&last) = stem.last() {
            if last == *period.last().unwrap() {
                stem.pop();
                period.rotate_right(1);
            } else {
                break;
            }
        }
        'outer: for d in 1..=period.len() {
            if period.len() % d != 0 {
                continue;
            }
            for i in d..period.len() {
                if period[i] != period[i - d] {
                    continue 'outer;
                }
            }
            period.truncate(d);
            break;
        }
        Lasso { stem, period }
    }

    /// Whether the two lassos denote the same infinite word.
    pub fn same_word(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Compare positionwise with `rel` up to the alignment horizon of the
    /// two lassos (after which both sides repeat jointly).
    pub fn pointwise(&self, other: &Self, rel: impl Fn(T, T) -> bool) -> bool {
        let horizon =
            self.stem.len().max(other.stem.len()) + lcm(self.period.len(), other.period.len());
        (0..horizon).all(|i| rel(self.at(i), other.at(i)))
    }
}

impl MacroLasso {
    /// `self` is a sub-macro-path of `other`: pointwise set inclusion.
    pub fn is_sub_lasso_of(&self, other: &MacroLasso) -> bool {
        self.pointwise(other, |a, b| a.is_subset_of(b))
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(bits: u64) -> MacroState {
        MacroState(bits)
    }

    #[test]
    fn canonical_minimizes_stem_and_period() {
        let l = Lasso::new(vec![m(1), m(2)], vec![m(3), m(2)]);
        // word: 1 2 3 2 3 2 ... = stem [1] period [2 3]
        let c = l.canonical();
        assert_eq!(c, Lasso::new(vec![m(1)], vec![m(2), m(3)]));
        let l2 = Lasso::new(vec![m(1)], vec![m(2), m(3), m(2), m(3)]);
        assert!(l.same_word(&l2));
    }

    #[test]
    fn suffix_rotates_into_the_period() {
        let l = Lasso::new(vec![m(1)], vec![m(2), m(3)]);
        assert_eq!(l.suffix(0), l);
        assert_eq!(l.suffix(1), Lasso::periodic(vec![m(2), m(3)]));
        assert_eq!(l.suffix(2), Lasso::periodic(vec![m(3), m(2)]));
        assert_eq!(l.suffix(4), Lasso::periodic(vec![m(3), m(2)]));
    }

    #[test]
    fn sub_lasso_alignment() {
        let big = Lasso::periodic(vec![m(0b11)]);
        let small = Lasso::new(vec![m(0b01)], vec![m(0b10), m(0b01)]);
        assert!(small.is_sub_lasso_of(&big));
        assert!(!big.is_sub_lasso_of(&small));
    }
}
