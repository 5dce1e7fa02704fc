//! Finite groups given by multiplication tables.
//!
//! Quotients D^x/N are handled through this type: the coset table of a
//! model produces a `GroupTable`, and abstract groups (S_3 x S_3, kappa
//! presentations) are built directly.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GroupTable {
    n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Vec<String>,
}

impl GroupTable {
    /// Builds and fully validates a group table.  Index 0 must be the identity.
    pub fn new(mul: Vec<Vec<usize>>, labels: Vec<String>) -> Result<GroupTable> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::TableInconsistent("empty table".into()));
        }
        if labels.len() != n {
            return Err(Error::TableInconsistent("label count mismatch".into()));
        }
        let mut flat = vec![0usize; n * n];
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::TableInconsistent(format!("row {i} has wrong length")));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::TableInconsistent(format!("entry ({i},{j}) out of range")));
                }
                flat[i * n + j] = v;
            }
        }
        for g in 0..n {
            if flat[g] != g || flat[g * n] != g {
                return Err(Error::TableInconsistent("index 0 is not the identity".into()));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for g in 0..n {
            for h in 0..n {
                if flat[g * n + h] == 0 {
                    inv[g] = h;
                }
            }
            if inv[g] == usize::MAX {
                return Err(Error::TableInconsistent(format!("element {g} has no inverse")));
            }
        }
        // associativity; quotients here are small, cubic cost is fine
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                        return Err(Error::TableInconsistent(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(GroupTable { n, mul: flat, inv, labels })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.commute(a, b)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut ord = 1;
        while x != 0 {
            x = self.mul(x, a);
            ord += 1;
        }
        ord
    }

    /// Map order -> number of elements of that order.
    pub fn order_profile(&self) -> BTreeMap<usize, usize> {
        let mut profile = BTreeMap::new();
        for g in 0..self.n {
            *profile.entry(self.element_order(g)).or_insert(0) += 1;
        }
        profile
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&g| (0..self.n).all(|h| self.commute(g, h)))
            .collect()
    }

    /// Subgroup generated by the given elements (sorted element list).
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack: Vec<usize> = vec![0];
        while let Some(g) = stack.pop() {
            for &s in gens {
                for next in [self.mul(g, s), self.mul(g, self.inv(s))] {
                    if !seen[next] {
                        seen[next] = true;
                        stack.push(next);
                    }
                }
            }
        }
        (0..self.n).filter(|&g| seen[g]).collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let member = {
            let mut m = vec![false; self.n];
            for &g in set {
                m[g] = true;
            }
            m
        };
        if !member[0] {
            return false;
        }
        set.iter().all(|&g| {
            member[self.inv(g)] && set.iter().all(|&h| member[self.mul(g, h)])
        })
    }

    pub fn direct_product(a: &GroupTable, b: &GroupTable) -> GroupTable {
        let n = a.n * b.n;
        let idx = |x: usize, y: usize| x * b.n + y;
        let mut mul = vec![0usize; n * n];
        let mut labels = Vec::with_capacity(n);
        for x in 0..a.n {
            for y in 0..b.n {
                labels.push(format!("({},{})", a.label(x), b.label(y)));
            }
        }
        for x1 in 0..a.n {
            for y1 in 0..b.n {
                for x2 in 0..a.n {
                    for y2 in 0..b.n {
                        mul[idx(x1, y1) * n + idx(x2, y2)] = idx(a.mul(x1, x2), b.mul(y1, y2));
                    }
                }
            }
        }
        let mut inv = vec![0usize; n];
        for x in 0..a.n {
            for y in 0..b.n {
                inv[idx(x, y)] = idx(a.inv(x), b.inv(y));
            }
        }
        GroupTable { n, mul, inv, labels }
    }

    /// The symmetric group S_k as permutations of {0..k-1}; identity first.
    pub fn symmetric(k: usize) -> GroupTable {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for pos in 0..k {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let mut all = perms(k);
        all.sort();
        // identity is the sorted-first permutation [0,1,..,k-1]
        let n = all.len();
        let index: BTreeMap<Vec<usize>, usize> =
            all.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> {
            // (p*q)(x) = p(q(x))
            (0..k).map(|x| p[q[x]]).collect()
        };
        let mut mul = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = index[&compose(&all[i], &all[j])];
            }
        }
        let mut inv = vec![0usize; n];
        for (i, p) in all.iter().enumerate() {
            let mut q = vec![0usize; k];
            for (x, &px) in p.iter().enumerate() {
                q[px] = x;
            }
            inv[i] = index[&q];
        }
        let labels = all
            .iter()
            .map(|p| {
                let body: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("[{}]", body.join(""))
            })
            .collect();
        GroupTable { n, mul, inv, labels }
    }

    /// Elementary abelian 2-group (Z/2)^k with bitmask elements.
    pub fn elementary_two(k: u32, labels: Vec<String>) -> Result<GroupTable> {
        let n = 1usize << k;
        if labels.len() != n {
            return Err(Error::TableInconsistent("label count mismatch".into()));
        }
        let mut mul = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = a ^ b;
            }
        }
        let inv = (0..n).collect();
        Ok(GroupTable { n, mul, inv, labels })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_structure() {
        let s3 = GroupTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let profile = s3.order_profile();
        assert_eq!(profile[&1], 1);
        assert_eq!(profile[&2], 3);
        assert_eq!(profile[&3], 2);
    }

    #[test]
    fn s3xs3_profile() {
        let s3 = GroupTable::symmetric(3);
        let g = GroupTable::direct_product(&s3, &s3);
        assert_eq!(g.order(), 36);
        let profile = g.order_profile();
        assert_eq!(profile[&1], 1);
        assert_eq!(profile[&2], 15);
        assert_eq!(profile[&3], 8);
        assert_eq!(profile[&6], 12);
        assert_eq!(g.center(), vec![0]);
    }

    #[test]
    fn subgroups() {
        let s3 = GroupTable::symmetric(3);
        let transposition = (1..6).find(|&g| s3.element_order(g) == 2).unwrap();
        let sub = s3.subgroup_generated(&[transposition]);
        assert_eq!(sub.len(), 2);
        assert!(s3.is_subgroup(&sub));
        assert!(!s3.is_subgroup(&vec![0, transposition, 5]) || s3.subgroup_generated(&[transposition, 5]).len() == 6);
    }
}
