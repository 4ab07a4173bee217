//! Partner sampling on the complete graph by opinion value.
//!
//! On a complete graph the selection weight of a partner depends only on its
//! opinion, so agents sharing a bitwise-equal opinion form one group and the
//! weight matrix is kept between groups rather than between agents. After the
//! first few hundred iterations there are far fewer distinct values than
//! agents, and a move only creates one new group row.
//!
//! The induced distribution over partners is exactly the per-agent one: the
//! mass of a group is its size times the shared weight, and the residual of
//! the same uniform draw picks a member.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use super::selection::BiasKernel;

pub(crate) struct MeanField {
    stride: usize,
    values: Vec<f64>,
    counts: Vec<f64>,
    members: Vec<Vec<u32>>,
    // weights[a * stride + b] for dense group indices a, b.
    weights: Vec<f64>,
    index: HashMap<u64, usize, BuildHasherDefault<BitsHasher>>,
    group_of: Vec<u32>,
    pos: Vec<u32>,
    masses: Vec<f64>,
    kernel: BiasKernel,
    d_eps: f64,
}

// Keys are already well-mixed float bit patterns; one multiply suffices.
#[derive(Default)]
struct BitsHasher(u64);

impl Hasher for BitsHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ u64::from(b)).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = (v ^ (v >> 29)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    }
}

fn key(v: f64) -> u64 {
    // Folds -0.0 onto 0.0.
    (v + 0.0).to_bits()
}

impl MeanField {
    pub(crate) fn build(opinions: &[f64], kernel: BiasKernel, d_eps: f64) -> Self {
        let n = opinions.len();
        let mut mf = Self {
            stride: n,
            values: Vec::new(),
            counts: Vec::new(),
            members: Vec::new(),
            weights: vec![0.0; n * n],
            index: HashMap::with_capacity_and_hasher(n, Default::default()),
            group_of: vec![0; n],
            pos: vec![0; n],
            masses: Vec::with_capacity(n),
            kernel,
            d_eps,
        };
        for (agent, &x) in opinions.iter().enumerate() {
            mf.insert(agent, x);
        }
        mf
    }

    #[cfg(test)]
    pub(crate) fn groups(&self) -> usize {
        self.values.len()
    }

    /// Partner of `i` for the uniform `u`, or `None` when `i` is alone.
    #[inline]
    pub(crate) fn pick(&mut self, i: usize, u: f64) -> Option<usize> {
        if self.stride < 2 {
            return None;
        }
        let a = self.group_of[i] as usize;
        let m = self.values.len();
        let row = &self.weights[a * self.stride..a * self.stride + m];
        self.masses.clear();
        self.masses.extend(row.iter().zip(&self.counts).map(|(w, c)| w * c));
        // i itself is not a candidate.
        self.masses[a] = row[a] * (self.counts[a] - 1.0);
        let total: f64 = self.masses.iter().sum();
        let target = u * total;
        let mut acc = 0.0;
        let mut b = m - 1;
        for (k, &s) in self.masses.iter().enumerate() {
            if s > 0.0 && acc + s > target {
                b = k;
                break;
            }
            acc += s;
        }
        // Rounding can leave the scan past the last nonempty group.
        while self.masses[b] <= 0.0 {
            b -= 1;
        }
        let size = if b == a { self.members[b].len() - 1 } else { self.members[b].len() };
        let r = ((target - acc).max(0.0) / row[b]) as usize;
        let k = r.min(size - 1);
        let k = if b == a && k >= self.pos[i] as usize { k + 1 } else { k };
        Some(self.members[b][k] as usize)
    }

    /// Moves `agent` to the group of value `x`.
    pub(crate) fn relocate(&mut self, agent: usize, x: f64) {
        self.remove(agent);
        self.insert(agent, x);
    }

    fn insert(&mut self, agent: usize, x: f64) {
        let g = match self.index.get(&key(x)) {
            Some(&g) => g,
            None => self.add_group(x),
        };
        self.group_of[agent] = g as u32;
        self.pos[agent] = self.members[g].len() as u32;
        self.members[g].push(agent as u32);
        self.counts[g] += 1.0;
    }

    fn add_group(&mut self, x: f64) -> usize {
        let g = self.values.len();
        let s = self.stride;
        let (kernel, d_eps) = (self.kernel, self.d_eps);
        let row = &mut self.weights[g * s..g * s + g];
        for (w, &v) in row.iter_mut().zip(&self.values) {
            *w = kernel.weight((x - v).abs(), d_eps);
        }
        for b in 0..g {
            self.weights[b * s + g] = self.weights[g * s + b];
        }
        self.weights[g * s + g] = self.kernel.weight(0.0, self.d_eps);
        self.values.push(x);
        self.counts.push(0.0);
        self.members.push(Vec::new());
        self.index.insert(key(x), g);
        g
    }

    fn remove(&mut self, agent: usize) {
        let g = self.group_of[agent] as usize;
        let p = self.pos[agent] as usize;
        let list = &mut self.members[g];
        list.swap_remove(p);
        if let Some(&moved) = list.get(p) {
            self.pos[moved as usize] = p as u32;
        }
        self.counts[g] -= 1.0;
        if list.is_empty() {
            self.drop_group(g);
        }
    }

    // Swap-removes group `g`, moving the last group into its slot.
    fn drop_group(&mut self, g: usize) {
        let last = self.values.len() - 1;
        self.index.remove(&key(self.values[g]));
        if g != last {
            let s = self.stride;
            for b in 0..=last {
                self.weights[g * s + b] = self.weights[last * s + b];
            }
            for b in 0..=last {
                self.weights[b * s + g] = self.weights[b * s + last];
            }
            self.weights[g * s + g] = self.weights[last * s + last];
            self.values[g] = self.values[last];
            self.counts[g] = self.counts[last];
            self.members.swap(g, last);
            for &agent in &self.members[g] {
                self.group_of[agent as usize] = g as u32;
            }
            self.index.insert(key(self.values[g]), g);
        }
        self.values.pop();
        self.counts.pop();
        self.members.pop();
    }

    /// Selection probability of every agent as partner of `i`.
    #[cfg(test)]
    pub(crate) fn probabilities(&self, i: usize) -> Vec<f64> {
        let a = self.group_of[i] as usize;
        let row = &self.weights[a * self.stride..];
        let mut p: Vec<f64> = (0..self.stride)
            .map(|j| if j == i { 0.0 } else { row[self.group_of[j] as usize] })
            .collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        p
    }

    #[cfg(test)]
    pub(crate) fn check(&self, opinions: &[f64]) {
        for (agent, &x) in opinions.iter().enumerate() {
            let g = self.group_of[agent] as usize;
            assert_eq!(self.values[g].to_bits(), x.to_bits());
            assert_eq!(self.members[g][self.pos[agent] as usize] as usize, agent);
        }
        let total: usize = self.members.iter().map(Vec::len).sum();
        assert_eq!(total, opinions.len());
        for (g, list) in self.members.iter().enumerate() {
            assert_eq!(self.counts[g], list.len() as f64);
            assert_eq!(self.index[&key(self.values[g])], g);
            for b in 0..self.values.len() {
                let w = self.kernel.weight((self.values[g] - self.values[b]).abs(), self.d_eps);
                assert_eq!(self.weights[g * self.stride + b], w);
            }
        }
    }
}
