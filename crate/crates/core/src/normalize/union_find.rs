//! Congruence closure over the a-edges of one island.
//!
//! Nodes are classes in a union-find forest. Each class keeps a map from
//! attribute to some target; when two classes meet, conflicting entries
//! queue further unions, so cascades are discovered without rescanning the
//! edge list.

use std::collections::BTreeMap;

use crate::syntax::Name;

pub(crate) struct Congruence {
    parent: Vec<usize>,
    out: Vec<BTreeMap<Name, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Congruence {
    pub(crate) fn new(n: usize) -> Self {
        Congruence {
            parent: (0..n).collect(),
            out: vec![BTreeMap::new(); n],
            pending: Vec::new(),
        }
    }

    pub(crate) fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Registers the edge `source -attr-> target`.
    pub(crate) fn edge(&mut self, source: usize, attr: &Name, target: usize) {
        let s = self.find(source);
        match self.out[s].get(attr) {
            Some(&t) => self.pending.push((t, target)),
            None => {
                self.out[s].insert(attr.clone(), target);
            }
        }
    }

    /// Requests that `a` and `b` end up in one class.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        self.pending.push((a, b));
    }

    /// Performs all queued unions and the unions they force. Returns the
    /// number of merges.
    pub(crate) fn close(&mut self) -> usize {
        let mut merges = 0;
        while let Some((a, b)) = self.pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            // Smaller map folds into the larger; ties keep the lower index.
            let (keep, gone) = match self.out[a].len().cmp(&self.out[b].len()) {
                std::cmp::Ordering::Less => (b, a),
                std::cmp::Ordering::Greater => (a, b),
                std::cmp::Ordering::Equal => (a.min(b), a.max(b)),
            };
            self.parent[gone] = keep;
            merges += 1;
            for (attr, t) in std::mem::take(&mut self.out[gone]) {
                match self.out[keep].get(&attr) {
                    Some(&t2) => self.pending.push((t, t2)),
                    None => {
                        self.out[keep].insert(attr, t);
                    }
                }
            }
        }
        merges
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cascades() {
        // 0 -f-> 1, 0 -f-> 2, 1 -g-> 3, 2 -g-> 4: everything below 0 pairs up.
        let mut c = Congruence::new(5);
        let (f, g) = (Name::new("f"), Name::new("g"));
        c.edge(0, &f, 1);
        c.edge(0, &f, 2);
        c.edge(1, &g, 3);
        c.edge(2, &g, 4);
        assert_eq!(c.close(), 2);
        assert_eq!(c.find(1), c.find(2));
        assert_eq!(c.find(3), c.find(4));
        assert_ne!(c.find(0), c.find(1));
    }

    #[test]
    fn explicit_unions_propagate() {
        let mut c = Congruence::new(4);
        let f = Name::new("f");
        c.edge(0, &f, 2);
        c.edge(1, &f, 3);
        c.union(0, 1);
        assert_eq!(c.close(), 2);
        assert_eq!(c.find(2), c.find(3));
    }
}
