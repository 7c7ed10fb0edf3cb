use std::collections::HashMap;

use super::{Action, Body, StateId, ThreadBuilder, ThreadSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Label<'a> {
    Deadlock,
    Stop,
    Post(&'a Action),
}

/// Coarsest stable partition of the disjoint union of `specs`. Returns the
/// block of every state, indexed by spec then state.
fn partition(specs: &[&ThreadSpec]) -> Vec<Vec<usize>> {
    let mut offsets = Vec::with_capacity(specs.len());
    let mut labels = Vec::new();
    let mut succ = Vec::new();
    for spec in specs {
        let base = labels.len();
        offsets.push(base);
        for (_, body) in spec.states() {
            match body {
                Body::Deadlock => {
                    labels.push(Label::Deadlock);
                    succ.push(None);
                }
                Body::Stop => {
                    labels.push(Label::Stop);
                    succ.push(None);
                }
                Body::Post {
                    action,
                    then,
                    otherwise,
                } => {
                    labels.push(Label::Post(action));
                    succ.push(Some((base + then.0, base + otherwise.0)));
                }
            }
        }
    }

    let mut ids = HashMap::new();
    let mut block: Vec<usize> = labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(*l).or_insert(next)
        })
        .collect();
    let mut count = ids.len();

    loop {
        let mut sigs = HashMap::new();
        let refined: Vec<usize> = (0..block.len())
            .map(|i| {
                let key = match succ[i] {
                    Some((t, e)) => (block[i], Some((block[t], block[e]))),
                    None => (block[i], None),
                };
                let next = sigs.len();
                *sigs.entry(key).or_insert(next)
            })
            .collect();
        block = refined;
        // splitting never merges, so an unchanged count means stable
        if sigs.len() == count {
            break;
        }
        count = sigs.len();
    }

    specs
        .iter()
        .zip(offsets)
        .map(|(spec, base)| block[base..base + spec.len()].to_vec())
        .collect()
}

/// Whether the two threads are equal, i.e. all their finite projections
/// coincide. Decided by partition refinement over both state graphs.
pub fn bisimilar(a: &ThreadSpec, b: &ThreadSpec) -> bool {
    let blocks = partition(&[a, b]);
    blocks[0][a.root().0] == blocks[1][b.root().0]
}

/// The quotient of `spec` by bisimilarity: the smallest equivalent spec.
pub fn minimize(spec: &ThreadSpec) -> ThreadSpec {
    let blocks = partition(&[spec]).pop().unwrap();
    let mut b = ThreadBuilder::new();
    let ids: Vec<StateId> = (0..spec.len())
        .map(|i| b.state(&format!("X{}", blocks[i])))
        .collect();
    for (i, body) in spec.states() {
        if !b.is_defined(ids[i.0]) {
            b.define(ids[i.0], body.map_states(|t| ids[t.0])).unwrap();
        }
    }
    b.build(ids[spec.root().0]).unwrap().renamed("X")
}
