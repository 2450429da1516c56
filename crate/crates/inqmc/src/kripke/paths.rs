use std::collections::HashSet;

use super::lasso::{lcm, Lasso, MacroLasso, PathLasso};
use super::sets::MacroState;
use super::structure::KripkeStructure;

/// Result of enumerating the paths encoded by a macro-lasso.
#[derive(Clone, Debug)]
pub struct PathEnumeration {
    pub paths: Vec<PathLasso>,
    /// Whether the path set is empty (iff the lasso is the all-empty one).
    pub is_empty: bool,
    /// True when enumeration stopped at the cap rather than exhausting all
    /// lassos within the representation bound.
    pub truncated: bool,
}

impl KripkeStructure {
    /// Positionwise union `mp`: the tightest macro-path abstracting a finite
    /// family of path lassos. The empty family yields the all-empty lasso.
    pub fn mp_of_paths(&self, paths: &[PathLasso]) -> MacroLasso {
        if paths.is_empty() {
            return MacroLasso::periodic(vec![MacroState::EMPTY]);
        }
        let stem = paths.iter().map(|p| p.stem.len()).max().unwrap();
        let period = paths
            .iter()
            .map(|p| p.period.len())
            .fold(1usize, lcm);
        let letter = |i: usize| {
            paths
                .iter()
                .fold(MacroState::EMPTY, |acc, p| acc.union(MacroState::singleton(p.at(i))))
        };
        MacroLasso::new(
            (0..stem).map(letter).collect(),
            (stem..stem + period).map(letter).collect(),
        )
    }

    /// Does the path lasso thread through the macro-lasso (`pi(i) in rho(i)`
    /// for all `i`)? The path itself must be R-chained to be a path at all;
    /// that is checked separately by `validate_path_lasso`.
    pub fn macro_lasso_contains_path(&self, rho: &MacroLasso, path: &PathLasso) -> bool {
        rho.pointwise(
            &Lasso::new(
                path.stem.iter().map(|&s| MacroState::singleton(s)).collect(),
                path.period.iter().map(|&s| MacroState::singleton(s)).collect(),
            ),
            |big, small| small.is_subset_of(big),
        )
    }

    /// Enumerate ultimately periodic members of the path set of `rho` by
    /// walking simple stems and simple cycles of the product graph of lasso
    /// positions and structure states, up to `cap` many. Stem and period of
    /// every result are bounded by `rho.total_len() * num_states()`.
    pub fn paths_of_macro_lasso(&self, rho: &MacroLasso, cap: usize) -> PathEnumeration {
        if rho.at(0).is_empty() {
            return PathEnumeration { paths: Vec::new(), is_empty: true, truncated: false };
        }
        let mut found: Vec<PathLasso> = Vec::new();
        let mut seen_words: HashSet<PathLasso> = HashSet::new();
        let mut truncated = false;
        // Walk the product graph (lasso position, state). A walk that
        // revisits a (position, state) pair in the periodic part closes a
        // path lasso.
        let mut stack: Vec<(usize, u32)> = Vec::new();
        for start in rho.at(0).iter() {
            if truncated {
                break;
            }
            stack.push((0, start));
            self.dfs_paths(rho, &mut stack, cap, &mut found, &mut seen_words, &mut truncated);
            stack.pop();
        }
        PathEnumeration { paths: found, is_empty: false, truncated }
    }

    fn dfs_paths(
        &self,
        rho: &MacroLasso,
        walk: &mut Vec<(usize, u32)>,
        cap: usize,
        found: &mut Vec<PathLasso>,
        seen: &mut HashSet<PathLasso>,
        truncated: &mut bool,
    ) {
        if found.len() >= cap {
            *truncated = true;
            return;
        }
        let &(pos, state) = walk.last().unwrap();
        let next_pos = rho.next_pos(pos);
        for next in self.successors(state).intersect(rho.at(next_pos)).iter() {
            if *truncated {
                return;
            }
            if let Some(j) = walk.iter().position(|&n| n == (next_pos, next)) {
                // Closing a lasso is only sound in the periodic part.
                if next_pos >= rho.stem.len() {
                    let states: Vec<u32> = walk.iter().map(|&(_, s)| s).collect();
                    let lasso =
                        PathLasso::new(states[..j].to_vec(), states[j..].to_vec()).canonical();
                    if seen.insert(lasso.clone()) {
                        found.push(lasso);
                        if found.len() >= cap {
                            *truncated = true;
                            return;
                        }
                    }
                }
                continue;
            }
            walk.push((next_pos, next));
            self.dfs_paths(rho, walk, cap, found, seen, truncated);
            walk.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state_total() -> KripkeStructure {
        KripkeStructure::build(
            vec![],
            vec![("s0".into(), vec![]), ("s1".into(), vec![])],
            vec!["s0".into()],
            vec![
                ("s0".into(), "s0".into()),
                ("s0".into(), "s1".into()),
                ("s1".into(), "s0".into()),
                ("s1".into(), "s1".into()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn mp_of_constant_paths_is_the_full_letter() {
        let k = two_state_total();
        let p0 = PathLasso::periodic(vec![0]);
        let p1 = PathLasso::periodic(vec![1]);
        let mp = k.mp_of_paths(&[p0.clone(), p1.clone()]);
        assert_eq!(mp, MacroLasso::periodic(vec![MacroState(0b11)]));
        // mp is a strict over-approximation: it also contains the alternating path.
        let alt = PathLasso::periodic(vec![0, 1]);
        assert!(k.macro_lasso_contains_path(&mp, &alt));
        assert!(k.macro_lasso_contains_path(&mp, &p0));
    }

    #[test]
    fn mp_of_singleton_is_exact() {
        let k = two_state_total();
        let p = PathLasso::new(vec![0], vec![1]);
        let mp = k.mp_of_paths(&[p.clone()]);
        let found = k.paths_of_macro_lasso(&mp, 16);
        assert!(!found.truncated);
        assert_eq!(found.paths.len(), 1);
        assert!(found.paths[0].same_word(&p));
    }

    #[test]
    fn mp_of_empty_family_is_all_empty() {
        let k = two_state_total();
        let mp = k.mp_of_paths(&[]);
        assert_eq!(mp, MacroLasso::periodic(vec![MacroState::EMPTY]));
        let found = k.paths_of_macro_lasso(&mp, 4);
        assert!(found.is_empty);
        assert!(found.paths.is_empty());
    }

    #[test]
    fn enumerates_paths_of_the_full_lasso() {
        let k = two_state_total();
        let rho = MacroLasso::periodic(vec![MacroState(0b11)]);
        let found = k.paths_of_macro_lasso(&rho, 64);
        assert!(!found.truncated);
        let words: Vec<PathLasso> = found.paths;
        for expect in [
            PathLasso::periodic(vec![0]),
            PathLasso::periodic(vec![1]),
            PathLasso::periodic(vec![0, 1]),
        ] {
            assert!(
                words.iter().any(|w| w.same_word(&expect)),
                "missing {expect:?}"
            );
        }
    }

    #[test]
    fn self_loop_singleton_lasso() {
        let k = KripkeStructure::build(
            vec![],
            vec![("s".into(), vec![])],
            vec!["s".into()],
            vec![("s".into(), "s".into())],
        )
        .unwrap();
        let rho = MacroLasso::periodic(vec![MacroState::singleton(0)]);
        let found = k.paths_of_macro_lasso(&rho, 8);
        assert_eq!(found.paths.len(), 1);
        assert!(found.paths[0].same_word(&PathLasso::periodic(vec![0])));
    }

    #[test]
    fn crossover_recombinations_are_included() {
        // Two paths sharing position-wise states lead to an mp whose path set
        // also contains their recombinations.
        let k = two_state_total();
        let a = PathLasso::periodic(vec![0, 1]);
        let b = PathLasso::periodic(vec![1, 0]);
        let mp = k.mp_of_paths(&[a, b]);
        let found = k.paths_of_macro_lasso(&mp, 64);
        assert!(found
            .paths
            .iter()
            .any(|p| p.same_word(&PathLasso::periodic(vec![0]))));
        assert!(found
            .paths
            .iter()
            .any(|p| p.same_word(&PathLasso::periodic(vec![1]))));
    }
}
