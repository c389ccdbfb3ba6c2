use std::collections::BTreeMap;

use super::{LinComb, Matrix, Q};

/// An ordered list of basis keys with reverse lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedBasis<K: Ord + Clone> {
    keys: Vec<K>,
    index: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for IndexedBasis<K> {
    fn default() -> Self {
        IndexedBasis {
            keys: Vec::new(),
            index: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> IndexedBasis<K> {
    pub fn new(keys: Vec<K>) -> Self {
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect::<BTreeMap<_, _>>();
        assert_eq!(index.len(), keys.len(), "duplicate basis keys");
        IndexedBasis { keys, index }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> &K {
        &self.keys[i]
    }

    pub fn position(&self, k: &K) -> Option<usize> {
        self.index.get(k).copied()
    }

    /// Dense coordinates of a combination; `None` if some key is not in the basis.
    pub fn coords(&self, c: &LinComb<K>) -> Option<Vec<Q>> {
        let mut v = super::zero_vec(self.len());
        for (k, x) in c.iter() {
            v[self.position(k)?] = x.clone();
        }
        Some(v)
    }

    pub fn combination(&self, v: &[Q]) -> LinComb<K> {
        self.keys.iter().cloned().zip(v.iter().cloned()).collect()
    }

    /// Matrix of a linear map given on basis keys, with columns indexed by `self`.
    ///
    /// Panics if an image leaves `target`.
    pub fn matrix_of<L: Ord + Clone, F>(&self, target: &IndexedBasis<L>, mut f: F) -> Matrix
    where
        F: FnMut(&K) -> LinComb<L>,
    {
        let mut m = Matrix::zeros(target.len(), self.len());
        for (j, k) in self.keys.iter().enumerate() {
            for (l, x) in f(k).iter() {
                let i = target.position(l).expect("image outside target basis");
                m.set(i, j, x.clone());
            }
        }
        m
    }
}
