//! Lazy depth-first generation of task assignments and per-vehicle orders.
//!
//! Task `l` (in id order) is inserted at every position of every vehicle
//! chain built from tasks `0..l`, so each assignment with each per-vehicle
//! order is produced exactly once. Children are visited by their chain lower
//! bound, then vehicle id, then position.

use super::state::Context;
use super::Goal;
use crate::model::{ObjectiveVector, Time};

#[derive(Clone, Debug)]
struct Partial {
    chains: Vec<Vec<usize>>,
    bounds: Vec<Time>,
}

impl Partial {
    fn key(&self) -> ObjectiveVector {
        let ms = self.bounds.iter().copied().max().unwrap_or(0);
        let rl = self.bounds.iter().map(|&b| u64::from(b)).sum();
        ObjectiveVector::new(ms.into(), rl, 0, 0)
    }
}

pub(crate) struct RootGenerator<'a> {
    ctx: &'a Context,
    stack: Vec<(Vec<Partial>, usize)>,
}

impl<'a> RootGenerator<'a> {
    pub fn new(ctx: &'a Context) -> Self {
        let v = ctx.vehicles.len();
        let root = Partial {
            chains: vec![Vec::new(); v],
            bounds: vec![0; v],
        };
        RootGenerator {
            ctx,
            stack: vec![(vec![root], 0)],
        }
    }

    fn expand(&self, p: &Partial, task: usize) -> Vec<Partial> {
        let mut out = Vec::new();
        for (c, chain) in p.chains.iter().enumerate() {
            for at in 0..=chain.len() {
                let mut ch = chain.clone();
                ch.insert(at, task);
                let Some(b) = self.ctx.chain_bound(self.ctx.starts[c], &ch) else {
                    continue;
                };
                let mut child = p.clone();
                child.chains[c] = ch;
                child.bounds[c] = b;
                out.push((child.key(), c, at, child));
            }
        }
        out.sort_by_key(|a| (a.0, a.1, a.2));
        out.into_iter().map(|(_, _, _, p)| p).collect()
    }

    /// Next complete set of chains whose bound is not pruned by `goal`
    /// against `incumbent`.
    pub fn next(
        &mut self,
        goal: &Goal,
        incumbent: Option<&ObjectiveVector>,
    ) -> Option<Vec<Vec<usize>>> {
        let tasks = self.ctx.tasks.len();
        loop {
            let depth = self.stack.len().checked_sub(1)?;
            let (children, idx) = self.stack.last_mut()?;
            if *idx == children.len() {
                self.stack.pop();
                if self.stack.is_empty() {
                    return None;
                }
                continue;
            }
            let child = children[*idx].clone();
            *idx += 1;
            if goal.prunes(&child.key(), incumbent) {
                continue;
            }
            if depth == tasks {
                return Some(child.chains);
            }
            let next = self.expand(&child, depth);
            self.stack.push((next, 0));
        }
    }
}
