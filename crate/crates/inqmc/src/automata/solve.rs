use super::haa::{Haa, Letter, StratumKind};
use super::pbf::Pbf;
use crate::error::{Error, Result};

/// The acceptance problem of an HAA on a fixed deterministic input (a lasso
/// of letters, or the forward-image orbit of a 1-letter product), flattened
/// into one finite graph: one node per (state, position) pair with a
/// transition formula over nodes, the stratum structure inherited
/// state-wise.
#[derive(Clone, Debug)]
pub struct AcceptanceGraph {
    pub delta: Vec<Pbf>,
    pub node_stratum: Vec<u32>,
    pub node_accepting: Vec<bool>,
    pub strata_kinds: Vec<StratumKind>,
    pub initial: u32,
}

/// Build the positioned product of an HAA with a deterministic letter
/// sequence: `letters[p]` is the letter index read at position `p`, `next[p]`
/// the following position.
pub fn positioned_graph<L: Letter>(
    haa: &Haa<L>,
    letters: &[usize],
    next: &[usize],
    stage: &'static str,
    max_states: usize,
) -> Result<AcceptanceGraph> {
    let positions = letters.len();
    let nodes = haa.num_states() * positions;
    if nodes > max_states {
        return Err(Error::BudgetExceeded { stage, budget: max_states });
    }
    let mut delta = Vec::with_capacity(nodes);
    let mut node_stratum = Vec::with_capacity(nodes);
    let mut node_accepting = vec![false; nodes];
    for q in 0..haa.num_states() as u32 {
        for p in 0..positions {
            let f = haa
                .delta(q, letters[p])
                .rename(|t| t * positions as u32 + next[p] as u32);
            delta.push(f);
            node_stratum.push(haa.stratum_of(q));
        }
    }
    for stratum in haa.strata() {
        for &q in &stratum.accepting {
            for p in 0..positions {
                node_accepting[q as usize * positions + p] = true;
            }
        }
    }
    Ok(AcceptanceGraph {
        delta,
        node_stratum,
        node_accepting,
        strata_kinds: haa.strata().iter().map(|s| s.kind).collect(),
        initial: haa.initial() * positions as u32,
    })
}

/// Solve the acceptance graph bottom-up over strata and return the value of
/// every node ("an accepting run tree exists from here").
///
/// Within a Büchi stratum runs branch existentially (at most one own-stratum
/// state per conjunct), so a node accepts iff it can reach an exit whose
/// side conditions are met or a cycle through an accepting node. Within a
/// coBüchi stratum branching is forced (one child per clause) and a node
/// accepts iff no reachable clause is stuck false and no reachable cycle
/// passes through an accepting node. Transient strata resolve by direct
/// evaluation.
pub fn node_values(g: &AcceptanceGraph) -> Vec<bool> {
    let n = g.delta.len();
    let mut value: Vec<Option<bool>> = vec![None; n];
    let num_strata = g.strata_kinds.len();
    let mut members_of: Vec<Vec<u32>> = vec![Vec::new(); num_strata];
    for v in 0..n {
        members_of[g.node_stratum[v] as usize].push(v as u32);
    }
    for i in (0..num_strata).rev() {
        let members = &members_of[i];
        match g.strata_kinds[i] {
            StratumKind::Transient => {
                for &v in members {
                    let ok = g.delta[v as usize]
                        .eval(|a| value[a as usize].expect("later stratum resolved"));
                    value[v as usize] = Some(ok);
                }
            }
            StratumKind::Buchi => solve_buchi(g, members, i as u32, &mut value),
            StratumKind::CoBuchi => solve_co_buchi(g, members, i as u32, &mut value),
        }
    }
    value.into_iter().map(|v| v.unwrap()).collect()
}

pub fn solve_acceptance(g: &AcceptanceGraph) -> bool {
    node_values(g)[g.initial as usize]
}

fn solve_buchi(g: &AcceptanceGraph, members: &[u32], stratum: u32, value: &mut [Option<bool>]) {
    let local = LocalIndex::new(members);
    let m = members.len();
    let mut edges: Vec<Vec<u32>> = vec![Vec::new(); m];
    let mut exit = vec![false; m];
    for (li, &v) in members.iter().enumerate() {
        'conjunct: for conjunct in g.delta[v as usize].dnf() {
            let mut own = None;
            for &a in conjunct {
                if g.node_stratum[a as usize] == stratum {
                    own = Some(a);
                } else if !value[a as usize].expect("later stratum resolved") {
                    continue 'conjunct;
                }
            }
            match own {
                None => exit[li] = true,
                Some(t) => edges[li].push(local.of(t)),
            }
        }
    }
    // Good nodes: exits, and accepting nodes lying on a local cycle.
    let on_cycle = cycle_nodes(&edges);
    let mut good = exit;
    for (li, &v) in members.iter().enumerate() {
        if g.node_accepting[v as usize] && on_cycle[li] {
            good[li] = true;
        }
    }
    let can = reach_backward(&edges, &good);
    for (li, &v) in members.iter().enumerate() {
        value[v as usize] = Some(can[li]);
    }
}

fn solve_co_buchi(g: &AcceptanceGraph, members: &[u32], stratum: u32, value: &mut [Option<bool>]) {
    let local = LocalIndex::new(members);
    let m = members.len();
    let mut edges: Vec<Vec<u32>> = vec![Vec::new(); m];
    let mut bad = vec![false; m];
    for (li, &v) in members.iter().enumerate() {
        'clause: for clause in g.delta[v as usize].cnf() {
            let mut own = None;
            for &a in &clause {
                if g.node_stratum[a as usize] == stratum {
                    own = Some(a);
                } else if value[a as usize].expect("later stratum resolved") {
                    continue 'clause; // clause already satisfied
                }
            }
            match own {
                None => {
                    bad[li] = true; // stuck clause: no run satisfies delta here
                    break;
                }
                Some(t) => edges[li].push(local.of(t)),
            }
        }
        edges[li].sort_unstable();
        edges[li].dedup();
    }
    // A node fails iff it can reach a stuck node or a cycle through an
    // accepting node; all paths are realized since branching is forced.
    let on_cycle = cycle_nodes(&edges);
    let mut doomed = bad;
    for (li, &v) in members.iter().enumerate() {
        if g.node_accepting[v as usize] && on_cycle[li] {
            doomed[li] = true;
        }
    }
    let fails = reach_backward(&edges, &doomed);
    for (li, &v) in members.iter().enumerate() {
        value[v as usize] = Some(!fails[li]);
    }
}

struct LocalIndex {
    map: std::collections::HashMap<u32, u32>,
}

impl LocalIndex {
    fn new(members: &[u32]) -> Self {
        LocalIndex {
            map: members.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect(),
        }
    }

    fn of(&self, v: u32) -> u32 {
        self.map[&v]
    }
}

/// Nodes lying on a cycle (nontrivial SCC, or a self-loop), via Tarjan.
fn cycle_nodes(edges: &[Vec<u32>]) -> Vec<bool> {
    let n = edges.len();
    let mut index = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut scc_of = vec![u32::MAX; n];
    let mut counter = 0u32;
    let mut scc_count = 0u32;

    // Iterative Tarjan to avoid recursion limits on large products.
    enum Frame {
        Enter(u32),
        Resume(u32, usize),
    }
    for root in 0..n as u32 {
        if index[root as usize] != u32::MAX {
            continue;
        }
        let mut frames = vec![Frame::Enter(root)];
        while let Some(frame) = frames.pop() {
            match frame {
                Frame::Enter(v) => {
                    index[v as usize] = counter;
                    low[v as usize] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v as usize] = true;
                    frames.push(Frame::Resume(v, 0));
                }
                Frame::Resume(v, mut i) => {
                    let mut descended = false;
                    while i < edges[v as usize].len() {
                        let w = edges[v as usize][i];
                        i += 1;
                        if index[w as usize] == u32::MAX {
                            frames.push(Frame::Resume(v, i));
                            frames.push(Frame::Enter(w));
                            descended = true;
                            break;
                        } else if on_stack[w as usize] {
                            low[v as usize] = low[v as usize].min(index[w as usize]);
                        }
                    }
                    if descended {
                        continue;
                    }
                    if low[v as usize] == index[v as usize] {
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w as usize] = false;
                            scc_of[w as usize] = scc_count;
                            if w == v {
                                break;
                            }
                        }
                        scc_count += 1;
                    }
                    if let Some(Frame::Resume(parent, _)) = frames.last() {
                        let p = *parent as usize;
                        low[p] = low[p].min(low[v as usize]);
                    }
                }
            }
        }
    }

    let mut scc_size = vec![0u32; scc_count as usize];
    for v in 0..n {
        scc_size[scc_of[v] as usize] += 1;
    }
    (0..n)
        .map(|v| {
            scc_size[scc_of[v] as usize] > 1
                || edges[v].contains(&(v as u32))
        })
        .collect()
}

/// Which nodes can reach a target node (reflexively).
fn reach_backward(edges: &[Vec<u32>], target: &[bool]) -> Vec<bool> {
    let n = edges.len();
    let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (v, out) in edges.iter().enumerate() {
        for &w in out {
            rev[w as usize].push(v as u32);
        }
    }
    let mut reach = target.to_vec();
    let mut stack: Vec<u32> = (0..n as u32).filter(|&v| reach[v as usize]).collect();
    while let Some(v) = stack.pop() {
        for &u in &rev[v as usize] {
            if !reach[u as usize] {
                reach[u as usize] = true;
                stack.push(u);
            }
        }
    }
    reach
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(
        delta: Vec<Pbf>,
        node_stratum: Vec<u32>,
        node_accepting: Vec<bool>,
        strata_kinds: Vec<StratumKind>,
    ) -> AcceptanceGraph {
        AcceptanceGraph { delta, node_stratum, node_accepting, strata_kinds, initial: 0 }
    }

    #[test]
    fn trapped_buchi_without_accepting_visits_rejects() {
        // One Büchi node looping on itself, empty accepting set.
        let g = graph(
            vec![Pbf::atom(0)],
            vec![0],
            vec![false],
            vec![StratumKind::Buchi],
        );
        assert!(!solve_acceptance(&g));
    }

    #[test]
    fn trapped_buchi_through_accepting_accepts() {
        let g = graph(
            vec![Pbf::atom(1), Pbf::atom(0)],
            vec![0, 0],
            vec![false, true],
            vec![StratumKind::Buchi],
        );
        assert!(solve_acceptance(&g));
    }

    #[test]
    fn buchi_exit_to_true_accepts() {
        let g = graph(
            vec![Pbf::tt()],
            vec![0],
            vec![false],
            vec![StratumKind::Buchi],
        );
        assert!(solve_acceptance(&g));
        let g = graph(
            vec![Pbf::ff()],
            vec![0],
            vec![false],
            vec![StratumKind::Buchi],
        );
        assert!(!solve_acceptance(&g));
    }

    #[test]
    fn co_buchi_traps_are_fine_unless_accepting() {
        let loop_ok = graph(
            vec![Pbf::atom(0)],
            vec![0],
            vec![false],
            vec![StratumKind::CoBuchi],
        );
        assert!(solve_acceptance(&loop_ok));
        let loop_bad = graph(
            vec![Pbf::atom(0)],
            vec![0],
            vec![true],
            vec![StratumKind::CoBuchi],
        );
        assert!(!solve_acceptance(&loop_bad));
    }

    #[test]
    fn co_buchi_universal_branching_requires_all() {
        // Node 0 forces both children: 1 loops quietly (fine), 2 is stuck.
        let g = graph(
            vec![
                Pbf::atom(1).and(&Pbf::atom(2)),
                Pbf::atom(1),
                Pbf::ff(),
            ],
            vec![0, 0, 0],
            vec![false, false, false],
            vec![StratumKind::CoBuchi],
        );
        assert!(!solve_acceptance(&g));
    }

    #[test]
    fn strata_resolve_bottom_up() {
        // Transient node 0 moves into a Büchi stratum {1,2} where only the
        // path through the accepting node 2 loops.
        let g = graph(
            vec![Pbf::atom(1).or(&Pbf::atom(2)), Pbf::ff(), Pbf::atom(2)],
            vec![0, 1, 1],
            vec![false, false, true],
            vec![StratumKind::Transient, StratumKind::Buchi],
        );
        assert!(solve_acceptance(&g));
    }
}
