//! The left-to-right dynamic program over a swap sequence.
//!
//! A state tracks, among the lines chosen so far, the current top `k` (`S`)
//! and the next `k - 1` (`T`), plus how many lines were chosen. Lines that
//! fall out of the tracked `2k - 1` can never return to the top `k`, so
//! forgetting them is safe. A state only reacts to swaps that involve one of
//! its tracked lines; the only branching is when an untracked line overtakes
//! the lowest tracked one, where the line is either added to the assortment
//! or ignored.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::par;
use crate::scalar::Scalar;

/// One swap of the sweep with `F(w-)` at its location.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepEvent<S> {
    pub up: usize,
    pub down: usize,
    pub cdf_left: S,
}

pub struct SweepInput<'a, S> {
    pub num_lines: usize,
    pub k: usize,
    /// Top to bottom before the first event; its first `2k - 1` entries are the
    /// initially tracked lines.
    pub initial_order: &'a [usize],
    pub events: &'a [SweepEvent<S>],
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult<S> {
    /// Union of the top-k sets along the winning path, as a line bitmask.
    pub lines: u128,
    pub value: S,
    pub states_visited: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    s: u128,
    t: u128,
    counter: u16,
}

#[derive(Clone, Debug)]
struct Live<S> {
    tracked: Vec<u16>,
    node: usize,
    value: S,
}

struct Node {
    parent: Option<usize>,
    s: u128,
}

struct Step<S> {
    bucket: usize,
    key: Key,
    tracked: Vec<u16>,
    value: S,
    parent: usize,
}

fn mask_of(lines: &[u16]) -> u128 {
    lines.iter().fold(0u128, |m, &x| m | 1u128 << x)
}

/// Runs the dynamic program. `g` scores a top-k line mask (it should ignore
/// padding lines); `budget` caps the number of chosen lines.
pub fn sweep<S, G>(input: &SweepInput<'_, S>, budget: Option<usize>, g: G) -> Result<SweepResult<S>>
where
    S: Scalar,
    G: Fn(u128) -> S + Sync,
{
    let k = input.k;
    let width = 2 * k - 1;
    if input.initial_order.len() < width || input.num_lines > 128 {
        return Err(Error::Internal("sweep needs 2k-1 initial lines and at most 128 lines".into()));
    }
    let n_events = input.events.len();
    let mut line_events: Vec<Vec<u32>> = vec![Vec::new(); input.num_lines];
    for (idx, e) in input.events.iter().enumerate() {
        line_events[e.up].push(idx as u32);
        line_events[e.down].push(idx as u32);
    }
    let next_event = |tracked: &[u16], from: usize| -> Option<usize> {
        tracked
            .iter()
            .filter_map(|&x| {
                let evs = &line_events[x as usize];
                let p = evs.partition_point(|&e| (e as usize) < from);
                evs.get(p).map(|&e| e as usize)
            })
            .min()
    };
    let cdf_at = |bucket: usize| -> S {
        if bucket == 0 {
            S::zero()
        } else {
            input.events[bucket - 1].cdf_left.clone()
        }
    };

    // Bucket b holds states after applying event b - 1; bucket 0 is the start.
    let mut buckets: Vec<BTreeMap<Key, Live<S>>> = (0..=n_events).map(|_| BTreeMap::new()).collect();
    let mut nodes: Vec<Node> = Vec::new();
    let start: Vec<u16> = input.initial_order[..width].iter().map(|&x| x as u16).collect();
    let s0 = mask_of(&start[..k]);
    nodes.push(Node { parent: None, s: s0 });
    buckets[0]
        .insert(Key { s: s0, t: mask_of(&start[k..]), counter: 0 }, Live { tracked: start, node: 0, value: S::zero() });
    let mut states_visited = 1usize;
    let mut best: Option<(usize, S)> = None;

    for b in 0..=n_events {
        let live: Vec<(Key, Live<S>)> = std::mem::take(&mut buckets[b]).into_iter().collect();
        if live.is_empty() {
            continue;
        }
        let here = cdf_at(b);
        let outcomes: Vec<(Option<(usize, S)>, Vec<Step<S>>)> = par::map_slice(&live, |(key, st)| {
            let gain = g(key.s);
            let Some(e) = next_event(&st.tracked, b) else {
                let closing = st.value.clone() + (S::one() - here.clone()) * gain;
                return (Some((st.node, closing)), Vec::new());
            };
            let ev = &input.events[e];
            let value = st.value.clone() + (ev.cdf_left.clone() - here.clone()) * gain;
            let pu = st.tracked.iter().position(|&x| x as usize == ev.up);
            let pd = st.tracked.iter().position(|&x| x as usize == ev.down);
            let mut outs = Vec::new();
            let mut push = |tracked: Vec<u16>, counter: u16| {
                let key = Key { s: mask_of(&tracked[..k]), t: mask_of(&tracked[k..]), counter };
                outs.push(Step { bucket: e + 1, key, tracked, value: value.clone(), parent: st.node });
            };
            match (pu, pd) {
                (Some(u), Some(d)) => {
                    let mut t = st.tracked.clone();
                    t.swap(u, d);
                    push(t, key.counter);
                }
                (None, Some(d)) if d == width - 1 => {
                    push(st.tracked.clone(), key.counter);
                    let counter = key.counter + 1;
                    if budget.is_none_or(|l| (counter as usize) <= l) {
                        let mut t = st.tracked.clone();
                        t[d] = ev.up as u16;
                        push(t, if budget.is_some() { counter } else { 0 });
                    }
                }
                _ => push(st.tracked.clone(), key.counter),
            }
            (None, outs)
        });
        for (closed, steps) in outcomes {
            if let Some((node, v)) = closed {
                if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
                    best = Some((node, v));
                }
            }
            for step in steps {
                let slot = &mut buckets[step.bucket];
                match slot.get_mut(&step.key) {
                    Some(existing) => {
                        if step.value > existing.value {
                            nodes.push(Node { parent: Some(step.parent), s: step.key.s });
                            existing.node = nodes.len() - 1;
                            existing.value = step.value;
                        }
                    }
                    None => {
                        nodes.push(Node { parent: Some(step.parent), s: step.key.s });
                        states_visited += 1;
                        slot.insert(step.key, Live { tracked: step.tracked, node: nodes.len() - 1, value: step.value });
                    }
                }
            }
        }
    }
    let (node, value) = best.ok_or_else(|| Error::Internal("sweep produced no final state".into()))?;
    Ok(SweepResult { lines: reconstruct(&nodes, node)?, value, states_visited })
}

/// Union of the top-k masks along the parent chain of `node`.
fn reconstruct(nodes: &[Node], mut node: usize) -> Result<u128> {
    let mut mask = 0u128;
    for _ in 0..=nodes.len() {
        let n = nodes.get(node).ok_or_else(|| Error::Internal(format!("dangling parent link {node}")))?;
        mask |= n.s;
        match n.parent {
            Some(p) => node = p,
            None => return Ok(mask),
        }
    }
    Err(Error::Internal("cycle in parent links".into()))
}
