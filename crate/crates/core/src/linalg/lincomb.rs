use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub};

use num::{One, Zero};

use super::Q;

/// Finite formal linear combination of keys with rational coefficients.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K, coeff: Q) -> Self {
        let mut c = Self::zero();
        c.add_term(key, coeff);
        c
    }

    pub fn basis(key: K) -> Self {
        Self::single(key, Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, key: K, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += coeff;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn add_scaled(&mut self, s: &Q, other: &LinComb<K>) {
        if s.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), s * v);
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::zero();
        out.add_scaled(s, self);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Applies a linear map given on basis keys.
    pub fn map_linear<L: Ord + Clone, F>(&self, mut f: F) -> LinComb<L>
    where
        F: FnMut(&K) -> LinComb<L>,
    {
        let mut out = LinComb::zero();
        for (k, v) in &self.terms {
            out.add_scaled(v, &f(k));
        }
        out
    }

    /// Same as [`map_linear`](Self::map_linear) for fallible maps.
    pub fn try_map_linear<L: Ord + Clone, E, F>(&self, mut f: F) -> Result<LinComb<L>, E>
    where
        F: FnMut(&K) -> Result<LinComb<L>, E>,
    {
        let mut out = LinComb::zero();
        for (k, v) in &self.terms {
            out.add_scaled(v, &f(k)?);
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Q)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        let mut c = LinComb::zero();
        for (k, v) in iter {
            c.add_term(k, v);
        }
        c
    }
}

impl<K: Ord + Clone> AddAssign<&LinComb<K>> for LinComb<K> {
    fn add_assign(&mut self, rhs: &LinComb<K>) {
        self.add_scaled(&Q::one(), rhs);
    }
}

impl<K: Ord + Clone> Add for LinComb<K> {
    type Output = LinComb<K>;
    fn add(mut self, rhs: LinComb<K>) -> LinComb<K> {
        self += &rhs;
        self
    }
}

impl<K: Ord + Clone> Sub for LinComb<K> {
    type Output = LinComb<K>;
    fn sub(mut self, rhs: LinComb<K>) -> LinComb<K> {
        self.add_scaled(&-Q::one(), &rhs);
        self
    }
}

impl<K: Ord + Clone> Neg for LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> LinComb<K> {
        self.scale(&-Q::one())
    }
}
