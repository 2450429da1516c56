use std::fmt;

/// A positive Boolean formula over automaton states, kept in canonical
/// disjunctive normal form: an antichain of conjuncts (sorted state sets),
/// itself sorted. `true` is the single empty conjunct, `false` the empty
/// disjunction. Monotone functions have a unique minimal DNF, so structural
/// equality coincides with logical equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pbf {
    conjuncts: Vec<Vec<u32>>,
}

impl Pbf {
    pub fn tt() -> Self {
        Pbf { conjuncts: vec![vec![]] }
    }

    pub fn ff() -> Self {
        Pbf { conjuncts: vec![] }
    }

    pub fn atom(q: u32) -> Self {
        Pbf { conjuncts: vec![vec![q]] }
    }

    pub fn when(cond: bool) -> Self {
        if cond { Pbf::tt() } else { Pbf::ff() }
    }

    pub fn is_true(&self) -> bool {
        self.conjuncts.len() == 1 && self.conjuncts[0].is_empty()
    }

    pub fn is_false(&self) -> bool {
        self.conjuncts.is_empty()
    }

    /// The DNF view: each conjunct is a sorted set of states.
    pub fn dnf(&self) -> &[Vec<u32>] {
        &self.conjuncts
    }

    /// The CNF view, derived on demand: clauses of the conjunction, each a
    /// sorted set of states. This is the DNF of the dual formula.
    pub fn cnf(&self) -> Vec<Vec<u32>> {
        self.dual().conjuncts
    }

    pub fn or(&self, other: &Pbf) -> Pbf {
        let mut conjuncts = self.conjuncts.clone();
        conjuncts.extend(other.conjuncts.iter().cloned());
        Pbf::normalized(conjuncts)
    }

    pub fn and(&self, other: &Pbf) -> Pbf {
        let mut conjuncts = Vec::with_capacity(self.conjuncts.len() * other.conjuncts.len());
        for a in &self.conjuncts {
            for b in &other.conjuncts {
                conjuncts.push(merge_sorted(a, b));
            }
        }
        Pbf::normalized(conjuncts)
    }

    pub fn or_all(items: impl IntoIterator<Item = Pbf>) -> Pbf {
        items.into_iter().fold(Pbf::ff(), |acc, f| acc.or(&f))
    }

    pub fn and_all(items: impl IntoIterator<Item = Pbf>) -> Pbf {
        items.into_iter().fold(Pbf::tt(), |acc, f| acc.and(&f))
    }

    /// Swap conjunction and disjunction (and hence `true` and `false`).
    /// The dual of the dual is the original formula.
    pub fn dual(&self) -> Pbf {
        // Each conjunct becomes a clause of the dual's CNF; distribute into DNF.
        let mut acc = Pbf::tt();
        for clause in &self.conjuncts {
            let options = Pbf { conjuncts: clause.iter().map(|&q| vec![q]).collect() };
            acc = acc.and(&options);
        }
        acc
    }

    /// All states mentioned anywhere in the formula.
    pub fn atoms(&self) -> impl Iterator<Item = u32> + '_ {
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.conjuncts {
            seen.extend(c.iter().copied());
        }
        seen.into_iter()
    }

    pub fn eval(&self, assign: impl Fn(u32) -> bool) -> bool {
        self.conjuncts.iter().any(|c| c.iter().all(|&q| assign(q)))
    }

    /// Rename every atom.
    pub fn rename(&self, f: impl Fn(u32) -> u32) -> Pbf {
        Pbf::normalized(
            self.conjuncts
                .iter()
                .map(|c| c.iter().map(|&q| f(q)).collect())
                .collect(),
        )
    }

    /// Substitute a formula for every atom.
    pub fn map_atoms(&self, f: impl Fn(u32) -> Pbf) -> Pbf {
        Pbf::or_all(self.conjuncts.iter().map(|c| {
            Pbf::and_all(c.iter().map(|&q| f(q)))
        }))
    }

    /// Replace atoms with known truth values, keeping the rest.
    pub fn reduce(&self, value: impl Fn(u32) -> Option<bool>) -> Pbf {
        self.map_atoms(|q| match value(q) {
            Some(b) => Pbf::when(b),
            None => Pbf::atom(q),
        })
    }

    fn normalized(mut conjuncts: Vec<Vec<u32>>) -> Pbf {
        for c in &mut conjuncts {
            c.sort_unstable();
            c.dedup();
        }
        conjuncts.sort();
        conjuncts.dedup();
        // Absorption: drop any conjunct that contains another one.
        let mut kept: Vec<Vec<u32>> = Vec::with_capacity(conjuncts.len());
        'next: for c in conjuncts {
            for k in &kept {
                if is_subset(k, &c) {
                    continue 'next;
                }
            }
            kept.retain(|k| !is_subset(&c, k));
            kept.push(c);
        }
        kept.sort();
        Pbf { conjuncts: kept }
    }
}

fn merge_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => { out.push(a[i]); i += 1 }
            std::cmp::Ordering::Greater => { out.push(b[j]); j += 1 }
            std::cmp::Ordering::Equal => { out.push(a[i]); i += 1; j += 1 }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut j = 0;
    for &x in a {
        loop {
            if j >= b.len() {
                return false;
            }
            match b[j].cmp(&x) {
                std::cmp::Ordering::Less => j += 1,
                std::cmp::Ordering::Equal => { j += 1; break }
                std::cmp::Ordering::Greater => return false,
            }
        }
    }
    true
}

impl fmt::Display for Pbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_false() {
            return write!(f, "false");
        }
        if self.is_true() {
            return write!(f, "true");
        }
        for (i, c) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "(")?;
            for (j, q) in c.iter().enumerate() {
                if j > 0 {
                    write!(f, " & ")?;
                }
                write!(f, "{q}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_behave() {
        assert!(Pbf::tt().is_true());
        assert!(Pbf::ff().is_false());
        assert_eq!(Pbf::tt().and(&Pbf::atom(3)), Pbf::atom(3));
        assert_eq!(Pbf::ff().and(&Pbf::atom(3)), Pbf::ff());
        assert_eq!(Pbf::ff().or(&Pbf::atom(3)), Pbf::atom(3));
        assert_eq!(Pbf::tt().or(&Pbf::atom(3)), Pbf::tt());
    }

    #[test]
    fn absorption_keeps_minimal_conjuncts() {
        let f = Pbf::atom(1).or(&Pbf::atom(1).and(&Pbf::atom(2)));
        assert_eq!(f, Pbf::atom(1));
        let g = Pbf::atom(1).and(&Pbf::atom(1));
        assert_eq!(g, Pbf::atom(1));
    }

    #[test]
    fn dual_is_an_involution() {
        let samples = [
            Pbf::tt(),
            Pbf::ff(),
            Pbf::atom(0),
            Pbf::atom(0).and(&Pbf::atom(1)).or(&Pbf::atom(2)),
            Pbf::atom(0).or(&Pbf::atom(1)).and(&Pbf::atom(2).or(&Pbf::atom(3))),
        ];
        for f in &samples {
            assert_eq!(&f.dual().dual(), f, "{f}");
        }
        assert_eq!(Pbf::tt().dual(), Pbf::ff());
    }

    #[test]
    fn dual_complements_on_all_assignments() {
        let f = Pbf::atom(0).and(&Pbf::atom(1)).or(&Pbf::atom(2));
        let d = f.dual();
        for bits in 0u32..8 {
            let assign = |q: u32| bits & (1 << q) != 0;
            let neg_assign = |q: u32| !assign(q);
            assert_eq!(f.eval(assign), !d.eval(neg_assign), "bits {bits}");
        }
    }

    #[test]
    fn cnf_matches_semantics() {
        let f = Pbf::atom(0).and(&Pbf::atom(1)).or(&Pbf::atom(2));
        let cnf = f.cnf();
        for bits in 0u32..8 {
            let assign = |q: u32| bits & (1 << q) != 0;
            let by_cnf = cnf.iter().all(|clause| clause.iter().any(|&q| assign(q)));
            assert_eq!(f.eval(assign), by_cnf, "bits {bits}");
        }
    }
}
