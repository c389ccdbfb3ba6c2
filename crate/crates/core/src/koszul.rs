//! Quadratic algebras `T(V)/(R)`, their Koszul duals, the Koszul complex and
//! the small Hochschild models `(A ⊗ A^!, δ)` and `(A ⊗ A^¡, b)`.
//!
//! Tensor words of length `w` over `n` generators are indexed in base `n`, most
//! significant letter first. The quotient `A_w` has as basis the standard
//! words: those that are not pivots when the ideal piece `I_w` is row reduced
//! with larger words scanned first.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{sign, AlgebraError, BasisElement, Commutativity, Element, GradedAlgebra, Product};
use crate::linalg::{HomologyPresentation, LinAlgError, Matrix, SpanSolver, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KoszulError {
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("weight {needed} is outside the window (cutoff {cutoff})")]
    WindowTooSmall { needed: u32, cutoff: u32 },
    #[error("presentation is not Koszul in weight {0}")]
    NotKoszul(u32),
    #[error("differential leaves the dual coalgebra in weight {0}")]
    NotInCoalgebra(u32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// `T(V)/(R)` with `R ⊆ V ⊗ V` given by coordinate vectors of length `n²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticPresentation {
    names: Vec<String>,
    degrees: Vec<i32>,
    relations: Vec<Vec<Q>>,
}

pub fn word_of(mut index: usize, n: usize, len: usize) -> Vec<usize> {
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    w
}

pub fn index_of(word: &[usize], n: usize) -> usize {
    word.iter().fold(0, |acc, &l| acc * n + l)
}

impl QuadraticPresentation {
    pub fn new(names: Vec<String>, degrees: Vec<i32>, relations: Vec<Vec<Q>>) -> Result<Self, KoszulError> {
        let n = names.len();
        if n == 0 || degrees.len() != n {
            return Err(KoszulError::Malformed("one degree per generator".into()));
        }
        for r in &relations {
            if r.len() != n * n {
                return Err(KoszulError::Malformed(format!("relation of length {} (need {})", r.len(), n * n)));
            }
            let mut degs = r
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, _)| degrees[k / n] + degrees[k % n]);
            if let Some(d) = degs.next() {
                if degs.any(|e| e != d) {
                    return Err(KoszulError::Malformed("relation is not homogeneous".into()));
                }
            }
        }
        if Matrix::from_dense(&relations).rank() != relations.len() {
            return Err(KoszulError::Malformed("relations are linearly dependent".into()));
        }
        Ok(QuadraticPresentation {
            names,
            degrees,
            relations,
        })
    }

    /// `k[x1..xn]`: `R` spanned by the commutators `x_i x_j - x_j x_i`.
    pub fn polynomial(n: usize) -> Self {
        let mut rels = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut r = vec![Q::zero(); n * n];
                r[i * n + j] = Q::one();
                r[j * n + i] = -Q::one();
                rels.push(r);
            }
        }
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        QuadraticPresentation::new(names, vec![0; n], rels).expect("polynomial presentation")
    }

    /// `Λ(ξ1..ξn)` with `|ξ_i| = -1`: `R` spanned by the symmetric tensors.
    pub fn exterior(n: usize) -> Self {
        let mut rels = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mut r = vec![Q::zero(); n * n];
                r[i * n + j] += Q::one();
                r[j * n + i] += Q::one();
                rels.push(r);
            }
        }
        let names = (1..=n).map(|i| format!("xi{i}")).collect();
        QuadraticPresentation::new(names, vec![-1; n], rels).expect("exterior presentation")
    }

    /// `k<x, y, z> / (x², yx, xz + zy)`, whose Koszul complex is not exact in weight 4.
    pub fn non_koszul_example() -> Self {
        let mut rels = vec![vec![Q::zero(); 9]; 3];
        rels[0][0] = Q::one();
        rels[1][3] = Q::one();
        rels[2][2] = Q::one();
        rels[2][7] = Q::one();
        let names = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        QuadraticPresentation::new(names, vec![0; 3], rels).expect("valid presentation")
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn relations(&self) -> &[Vec<Q>] {
        &self.relations
    }

    pub fn word_degree(&self, word: &[usize]) -> i32 {
        word.iter().map(|&l| self.degrees[l]).sum()
    }

    /// Basis of `R^⊥ ⊆ V* ⊗ V*` under `<e_i* ⊗ e_j*, e_k ⊗ e_l> = δ_ik δ_jl`.
    pub fn annihilator(&self) -> Vec<Vec<Q>> {
        let n = self.n();
        if self.relations.is_empty() {
            return (0..n * n).map(|k| crate::linalg::unit_vec(n * n, k)).collect();
        }
        let mut m = Matrix::zeros(self.relations.len(), n * n);
        for (r, rel) in self.relations.iter().enumerate() {
            for (c, v) in rel.iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v.clone());
                }
            }
        }
        m.kernel_basis()
    }

    /// Presentation of `A^!`: generators `e_i*` of degree `-|e_i| - 1`, relations `R^⊥`.
    pub fn dual(&self) -> QuadraticPresentation {
        let names = self.names.iter().map(|s| format!("{s}*")).collect();
        let degrees = self.degrees.iter().map(|d| -d - 1).collect();
        QuadraticPresentation::new(names, degrees, self.annihilator()).expect("annihilator is a valid presentation")
    }

    /// Spanning vectors of `I_w = Σ V^{⊗i} ⊗ R ⊗ V^{⊗j}` in `V^{⊗w}`.
    fn ideal_spanning(&self, w: usize) -> Vec<BTreeMap<usize, Q>> {
        let n = self.n();
        let mut out = Vec::new();
        if w < 2 {
            return out;
        }
        for i in 0..=w - 2 {
            let j = w - 2 - i;
            for pre in 0..n.pow(i as u32) {
                for post in 0..n.pow(j as u32) {
                    for r in &self.relations {
                        let mut v = BTreeMap::new();
                        for (k, c) in r.iter().enumerate() {
                            if !c.is_zero() {
                                let idx = (pre * n * n + k) * n.pow(j as u32) + post;
                                v.insert(idx, c.clone());
                            }
                        }
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    /// `U_w = ⋂ V^{⊗i} ⊗ R ⊗ V^{⊗j}`, one homogeneous basis per internal degree.
    pub fn coalgebra_piece(&self, w: usize) -> Vec<(i32, Vec<Q>)> {
        let n = self.n();
        let size = n.pow(w as u32);
        let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for idx in 0..size {
            by_degree.entry(self.word_degree(&word_of(idx, n, w))).or_default().push(idx);
        }
        let perp = self.annihilator();
        let mut out = Vec::new();
        for (deg, cols) in by_degree {
            let local: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let mut rows: Vec<BTreeMap<usize, Q>> = Vec::new();
            if w >= 2 {
                for i in 0..=w - 2 {
                    let j = w - 2 - i;
                    for pre in 0..n.pow(i as u32) {
                        for post in 0..n.pow(j as u32) {
                            for f in &perp {
                                let mut row = BTreeMap::new();
                                for (k, c) in f.iter().enumerate() {
                                    let idx = (pre * n * n + k) * n.pow(j as u32) + post;
                                    if let (false, Some(&l)) = (c.is_zero(), local.get(&idx)) {
                                        row.insert(l, c.clone());
                                    }
                                }
                                if !row.is_empty() {
                                    rows.push(row);
                                }
                            }
                        }
                    }
                }
            }
            let kernel = if rows.is_empty() {
                (0..cols.len()).map(|i| crate::linalg::unit_vec(cols.len(), i)).collect()
            } else {
                let mut m = Matrix::zeros(rows.len(), cols.len());
                for (r, row) in rows.iter().enumerate() {
                    for (&c, v) in row {
                        m.set(r, c, v.clone());
                    }
                }
                m.kernel_basis()
            };
            for v in kernel {
                let mut full = vec![Q::zero(); size];
                for (i, c) in v.into_iter().enumerate() {
                    full[cols[i]] = c;
                }
                out.push((deg, full));
            }
        }
        out
    }
}

/// Row-reduced ideal piece: normal forms in `A_w`.
#[derive(Debug, Clone)]
struct WeightPiece {
    rows: Vec<(usize, BTreeMap<usize, Q>)>,
    standard: Vec<usize>,
}

impl WeightPiece {
    fn new(pres: &QuadraticPresentation, w: usize) -> Self {
        let size = pres.n().pow(w as u32);
        let span = pres.ideal_spanning(w);
        let flip = |idx: usize| size - 1 - idx;
        let mut rows = Vec::new();
        let mut pivot_set = std::collections::BTreeSet::new();
        if !span.is_empty() {
            let mut m = Matrix::zeros(span.len(), size);
            for (r, v) in span.iter().enumerate() {
                for (&c, x) in v {
                    m.set(r, flip(c), x.clone());
                }
            }
            let rref = m.rref();
            for (r, &p) in rref.pivots.iter().enumerate() {
                let row: BTreeMap<usize, Q> = rref.reduced.row(r).iter().map(|(&c, x)| (flip(c), x.clone())).collect();
                pivot_set.insert(flip(p));
                rows.push((flip(p), row));
            }
        }
        let standard = (0..size).filter(|i| !pivot_set.contains(i)).collect();
        WeightPiece { rows, standard }
    }

    fn reduce(&self, v: &BTreeMap<usize, Q>) -> Vec<Q> {
        let mut v = v.clone();
        for (p, row) in &self.rows {
            let Some(c) = v.get(p).cloned() else { continue };
            if c.is_zero() {
                continue;
            }
            for (k, x) in row {
                let e = v.entry(*k).or_insert_with(Q::zero);
                *e -= &c * x;
            }
        }
        self.standard.iter().map(|s| v.get(s).cloned().unwrap_or_else(Q::zero)).collect()
    }
}

/// The quotient algebra computed through weight `cutoff`.
#[derive(Debug, Clone)]
pub struct QuadraticAlgebra {
    pres: QuadraticPresentation,
    cutoff: u32,
    pieces: Vec<WeightPiece>,
    offsets: Vec<usize>,
    finite: bool,
    algebra: GradedAlgebra,
}

fn word_label(pres: &QuadraticPresentation, word: &[usize]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        let name = &pres.names[word[i]];
        parts.push(if j - i == 1 { name.clone() } else { format!("{name}^{}", j - i) });
        i = j;
    }
    parts.join("*")
}

impl QuadraticAlgebra {
    /// Builds `A_0, ..., A_cutoff`; if some `A_w` vanishes the algebra is finite
    /// and no truncation is recorded.
    pub fn new(pres: QuadraticPresentation, cutoff: u32) -> Result<Self, KoszulError> {
        let n = pres.n();
        let mut pieces: Vec<WeightPiece> = Vec::new();
        let mut finite = false;
        for w in 0..=cutoff as usize {
            let p = WeightPiece::new(&pres, w);
            let empty = p.standard.is_empty();
            pieces.push(p);
            if empty {
                finite = true;
                break;
            }
        }
        let mut offsets = Vec::new();
        let mut basis = Vec::new();
        let mut words = Vec::new();
        for (w, p) in pieces.iter().enumerate() {
            offsets.push(basis.len());
            for &s in &p.standard {
                let word = word_of(s, n, w);
                basis.push(BasisElement {
                    label: word_label(&pres, &word),
                    degree: pres.word_degree(&word),
                    weight: w as u32,
                });
                words.push(word);
            }
        }
        let top = pieces.len() - 1;
        let mut table = Vec::with_capacity(words.len());
        for u in &words {
            let mut row = Vec::with_capacity(words.len());
            for v in &words {
                let w = u.len() + v.len();
                if w > top {
                    row.push(if finite {
                        Product::Terms(Element::zero())
                    } else {
                        Product::OutOfWindow(w as u32)
                    });
                    continue;
                }
                let mut cat = u.clone();
                cat.extend_from_slice(v);
                let coords = pieces[w].reduce(&BTreeMap::from([(index_of(&cat, n), Q::one())]));
                let mut e = Element::zero();
                for (i, c) in coords.into_iter().enumerate() {
                    e.add_term(offsets[w] + i, c);
                }
                row.push(Product::Terms(e));
            }
            table.push(row);
        }
        let algebra = GradedAlgebra::new(basis, 0, table, Commutativity::None, (!finite).then_some(cutoff))?;
        Ok(QuadraticAlgebra {
            pres,
            cutoff,
            pieces,
            offsets,
            finite,
            algebra,
        })
    }

    pub fn presentation(&self) -> &QuadraticPresentation {
        &self.pres
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    /// `dim A_w`, or `None` outside the computed window.
    pub fn dim(&self, w: usize) -> Option<usize> {
        match self.pieces.get(w) {
            Some(p) => Some(p.standard.len()),
            None if self.finite => Some(0),
            None => None,
        }
    }

    /// Index in [`Self::algebra`] of the `i`-th standard word of weight `w`.
    pub fn basis_index(&self, w: usize, i: usize) -> usize {
        self.offsets[w] + i
    }

    pub fn standard_word(&self, w: usize, i: usize) -> Vec<usize> {
        word_of(self.pieces[w].standard[i], self.pres.n(), w)
    }

    /// Coordinates of a tensor (word index -> coefficient) in the standard basis of `A_w`.
    pub fn normal_form(&self, w: usize, v: &BTreeMap<usize, Q>) -> Result<Vec<Q>, KoszulError> {
        match self.pieces.get(w) {
            Some(p) => Ok(p.reduce(v)),
            None if self.finite => Ok(Vec::new()),
            None => Err(KoszulError::WindowTooSmall {
                needed: w as u32,
                cutoff: self.cutoff,
            }),
        }
    }

    /// Product of the `i`-th standard word of weight `w` with the word `letters`
    /// on the left (`left = true`) or right, in standard coordinates.
    fn times_word(&self, w: usize, i: usize, letters: &[usize], left: bool) -> Result<Vec<Q>, KoszulError> {
        let a = self.standard_word(w, i);
        let cat: Vec<usize> = if left {
            letters.iter().chain(a.iter()).copied().collect()
        } else {
            a.iter().chain(letters.iter()).copied().collect()
        };
        self.normal_form(cat.len(), &BTreeMap::from([(index_of(&cat, self.pres.n()), Q::one())]))
    }
}

/// `A`, `A^!` and the dual coalgebra pieces `U_w` through a weight cutoff.
#[derive(Debug, Clone)]
pub struct KoszulDualData {
    pub source: QuadraticAlgebra,
    pub dual: QuadraticAlgebra,
    /// `U_w` basis vectors in `V^{⊗w}` with their internal degrees.
    pub coalgebra: Vec<Vec<(i32, Vec<Q>)>>,
    solvers: Vec<SpanSolver>,
}

pub fn koszul_dual_algebra(pres: &QuadraticPresentation, cutoff: u32) -> Result<KoszulDualData, KoszulError> {
    if cutoff < 2 {
        return Err(KoszulError::WindowTooSmall { needed: 2, cutoff });
    }
    let source = QuadraticAlgebra::new(pres.clone(), cutoff)?;
    let dual = QuadraticAlgebra::new(pres.dual(), cutoff)?;
    let mut coalgebra = Vec::new();
    let mut solvers = Vec::new();
    for w in 0..=cutoff as usize {
        let piece = pres.coalgebra_piece(w);
        let cols: Vec<Vec<Q>> = piece.iter().map(|(_, v)| v.clone()).collect();
        solvers.push(SpanSolver::new(pres.n().pow(w as u32), &cols)?);
        coalgebra.push(piece);
    }
    Ok(KoszulDualData {
        source,
        dual,
        coalgebra,
        solvers,
    })
}

impl KoszulDualData {
    pub fn cutoff(&self) -> u32 {
        self.source.cutoff
    }

    pub fn coalgebra_dim(&self, w: usize) -> usize {
        self.coalgebra[w].len()
    }

    fn coalgebra_coords(&self, w: usize, v: &[Q]) -> Result<Vec<Q>, KoszulError> {
        self.solvers[w].solve(v)?.ok_or(KoszulError::NotInCoalgebra(w as u32))
    }
}

/// A finite complex graded by an integer; `maps[k]` leaves degree `k` and
/// lands in degree `k + step` with `step = ±1`.
#[derive(Debug, Clone)]
pub struct GradedComplex {
    pub label: String,
    pub step: i32,
    pub dims: BTreeMap<i32, usize>,
    pub maps: BTreeMap<i32, Matrix>,
}

impl GradedComplex {
    fn map(&self, k: i32) -> Matrix {
        self.maps.get(&k).cloned().unwrap_or_else(|| {
            Matrix::zeros(
                self.dims.get(&(k + self.step)).copied().unwrap_or(0),
                self.dims.get(&k).copied().unwrap_or(0),
            )
        })
    }

    /// Returns the first degree where `d ∘ d ≠ 0`.
    pub fn square_defect(&self) -> Option<i32> {
        self.dims
            .keys()
            .copied()
            .find(|&k| !self.map(k + self.step).mul(&self.map(k)).map(|m| m.is_zero()).unwrap_or(false))
    }

    pub fn homology(&self, k: i32) -> Result<HomologyPresentation, KoszulError> {
        Ok(HomologyPresentation::new(&self.map(k - self.step), &self.map(k))?)
    }

    pub fn homology_dim(&self, k: i32) -> Result<usize, KoszulError> {
        Ok(self.homology(k)?.dim())
    }
}

/// Koszul complex in weight `w`: `A_{w-j} ⊗ U_j` in degree `j`, with
/// `d(a ⊗ e_i u) = a e_i ⊗ u`.
pub fn koszul_complex(data: &KoszulDualData, w: u32) -> Result<GradedComplex, KoszulError> {
    if w > data.cutoff() {
        return Err(KoszulError::WindowTooSmall {
            needed: w,
            cutoff: data.cutoff(),
        });
    }
    let w = w as usize;
    let a = &data.source;
    let n = a.pres.n();
    let dim_a = |p: usize| a.dim(p).unwrap_or(0);
    let mut dims = BTreeMap::new();
    let mut maps = BTreeMap::new();
    for j in 0..=w {
        dims.insert(j as i32, dim_a(w - j) * data.coalgebra_dim(j));
    }
    for j in 1..=w {
        let p = w - j;
        let (src_u, dst_u) = (data.coalgebra_dim(j), data.coalgebra_dim(j - 1));
        let mut m = Matrix::zeros(dim_a(p + 1) * dst_u, dim_a(p) * src_u);
        for ai in 0..dim_a(p) {
            for (ui, (_, u)) in data.coalgebra[j].iter().enumerate() {
                let mut partial: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
                for (idx, c) in u.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let word = word_of(idx, n, j);
                    let prod = a.times_word(p, ai, &word[..1], false)?;
                    let rest = index_of(&word[1..], n);
                    for (bi, x) in prod.into_iter().enumerate() {
                        if !x.is_zero() {
                            let v = partial.entry(bi).or_insert_with(|| vec![Q::zero(); n.pow(j as u32 - 1)]);
                            v[rest] += c * x;
                        }
                    }
                }
                for (bi, v) in partial {
                    for (vi, x) in data.coalgebra_coords(j - 1, &v)?.into_iter().enumerate() {
                        if !x.is_zero() {
                            m.add_to(bi * dst_u + vi, ai * src_u + ui, &x);
                        }
                    }
                }
            }
        }
        maps.insert(j as i32, m);
    }
    Ok(GradedComplex {
        label: format!("koszul complex, weight {w}"),
        step: -1,
        dims,
        maps,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightVerdict {
    pub weight: u32,
    pub homology: Vec<usize>,
    pub acyclic: bool,
}

/// Koszulness certified weight by weight; never claimed beyond `cutoff`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoszulVerdict {
    pub cutoff: u32,
    pub weights: Vec<WeightVerdict>,
}

impl KoszulVerdict {
    /// Largest `w` such that the Koszul complex is acyclic in every weight `1..=w`.
    pub fn koszul_up_to(&self) -> u32 {
        self.weights
            .iter()
            .take_while(|v| v.acyclic)
            .map(|v| v.weight)
            .last()
            .unwrap_or(0)
    }

    pub fn is_koszul_in_window(&self) -> bool {
        self.weights.iter().all(|v| v.acyclic)
    }

    pub fn first_failure(&self) -> Option<u32> {
        self.weights.iter().find(|v| !v.acyclic).map(|v| v.weight)
    }
}

pub fn is_koszul(data: &KoszulDualData) -> Result<KoszulVerdict, KoszulError> {
    let mut weights = Vec::new();
    for w in 1..=data.cutoff() {
        let cx = koszul_complex(data, w)?;
        let homology = (0..=w as i32).map(|j| cx.homology_dim(j)).collect::<Result<Vec<_>, _>>()?;
        let acyclic = homology.iter().all(|&h| h == 0);
        weights.push(WeightVerdict {
            weight: w,
            homology,
            acyclic,
        });
    }
    Ok(KoszulVerdict {
        cutoff: data.cutoff(),
        weights,
    })
}

/// Key of a small-model basis element: weight and index of the `A` factor,
/// weight and index of the second factor.
pub type SmallKey = (usize, usize, usize, usize);

/// Small chain complex `A ⊗ U` in total weight `w`, graded by `j + |a| + |u|`.
///
/// `b(a ⊗ u) = Σ a e ⊗ u' + (-1)^{j + |f|(|a| + |u''|)} f a ⊗ u''` where
/// `u = Σ e ⊗ u' = Σ u'' ⊗ f`.
pub fn small_chain_complex(data: &KoszulDualData, w: u32) -> Result<(GradedComplex, Vec<Vec<SmallKey>>), KoszulError> {
    small_chain_complex_with(data, w, |j, da, de, drest| {
        (j as i32 + de * (da + drest)).rem_euclid(2) == 1
    })
}

pub(crate) fn small_chain_complex_with(
    data: &KoszulDualData,
    w: u32,
    second_sign: impl Fn(usize, i32, i32, i32) -> bool,
) -> Result<(GradedComplex, Vec<Vec<SmallKey>>), KoszulError> {
    if w > data.cutoff() {
        return Err(KoszulError::WindowTooSmall {
            needed: w,
            cutoff: data.cutoff(),
        });
    }
    let w = w as usize;
    let a = &data.source;
    let pres = &a.pres;
    let n = pres.n();
    let mut keys: BTreeMap<i32, Vec<SmallKey>> = BTreeMap::new();
    for j in 0..=w {
        let p = w - j;
        for ai in 0..a.dim(p).unwrap_or(0) {
            let da = a.algebra.degree(a.basis_index(p, ai));
            for (ui, (du, _)) in data.coalgebra[j].iter().enumerate() {
                keys.entry(j as i32 + da + du).or_default().push((p, ai, j, ui));
            }
        }
    }
    let position: BTreeMap<SmallKey, (i32, usize)> = keys
        .iter()
        .flat_map(|(&d, ks)| ks.iter().enumerate().map(move |(i, k)| (*k, (d, i))))
        .collect();
    let mut maps: BTreeMap<i32, Matrix> = BTreeMap::new();
    for (&d, ks) in &keys {
        let target_dim = keys.get(&(d - 1)).map_or(0, |v| v.len());
        let mut m = Matrix::zeros(target_dim, ks.len());
        for (col, &(p, ai, j, ui)) in ks.iter().enumerate() {
            if j == 0 {
                continue;
            }
            let da = a.algebra.degree(a.basis_index(p, ai));
            let u = &data.coalgebra[j][ui].1;
            let mut partial: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
            for (idx, c) in u.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let word = word_of(idx, n, j);
                let (first, tail) = (word[0], &word[1..]);
                for (bi, x) in a.times_word(p, ai, &[first], false)?.into_iter().enumerate() {
                    if !x.is_zero() {
                        let v = partial.entry(bi).or_insert_with(|| vec![Q::zero(); n.pow(j as u32 - 1)]);
                        v[index_of(tail, n)] += c * x;
                    }
                }
                let (last, head) = (word[j - 1], &word[..j - 1]);
                let s = sign(second_sign(j, da, pres.degrees[last], pres.word_degree(head)));
                for (bi, x) in a.times_word(p, ai, &[last], true)?.into_iter().enumerate() {
                    if !x.is_zero() {
                        let v = partial.entry(bi).or_insert_with(|| vec![Q::zero(); n.pow(j as u32 - 1)]);
                        v[index_of(head, n)] += c * x * &s;
                    }
                }
            }
            for (bi, v) in partial {
                for (vi, x) in data.coalgebra_coords(j - 1, &v)?.into_iter().enumerate() {
                    if !x.is_zero() {
                        let (td, row) = position[&(p + 1, bi, j - 1, vi)];
                        debug_assert_eq!(td, d - 1);
                        m.add_to(row, col, &x);
                    }
                }
            }
        }
        maps.insert(d, m);
    }
    let dims = keys.iter().map(|(&d, v)| (d, v.len())).collect();
    let order = keys.into_values().collect();
    Ok((
        GradedComplex {
            label: format!("small hochschild chains, weight {w}"),
            step: -1,
            dims,
            maps,
        },
        order,
    ))
}

/// Small cochain complex `A ⊗ A^!` at weight shift `s = wt(a) - wt(x)`,
/// graded by `t = -(|a| + |x|)`, with
/// `δ(a ⊗ x) = Σ (-1)^{|e*||a|} e a ⊗ e* x - (-1)^{|a| + |x| + |x||e|} a e ⊗ x e*`.
///
/// Pieces whose differential would leave the window of `A` or `A^!` are
/// reported in the returned list of incomplete degrees.
pub fn small_cochain_complex(data: &KoszulDualData, s: i64) -> Result<SmallCochains, KoszulError> {
    small_cochain_complex_with(data, s, |da, dx, de, dstar| {
        (
            (dstar * da).rem_euclid(2) == 1,
            (da + dx + dx * de).rem_euclid(2) == 1,
        )
    })
}

#[derive(Debug, Clone)]
pub struct SmallCochains {
    pub complex: GradedComplex,
    pub keys: BTreeMap<i32, Vec<SmallKey>>,
    /// Degrees whose outgoing differential is not fully inside the window.
    pub incomplete: Vec<i32>,
}

impl SmallCochains {
    /// `dim` of the cohomology in degree `t`, or `None` when the window does not determine it.
    pub fn cohomology_dim(&self, t: i32) -> Result<Option<usize>, KoszulError> {
        if self.incomplete.contains(&t) {
            return Ok(None);
        }
        self.complex.homology_dim(t).map(Some)
    }
}

pub(crate) fn small_cochain_complex_with(
    data: &KoszulDualData,
    s: i64,
    signs: impl Fn(i32, i32, i32, i32) -> (bool, bool),
) -> Result<SmallCochains, KoszulError> {
    let a = &data.source;
    let x = &data.dual;
    let pres = &a.pres;
    let dual_pres = &x.pres;
    let n = pres.n();
    let cutoff = data.cutoff() as i64;
    let mut keys: BTreeMap<i32, Vec<SmallKey>> = BTreeMap::new();
    for j in 0..=cutoff {
        let p = s + j;
        if p < 0 || p > cutoff {
            continue;
        }
        let (p, j) = (p as usize, j as usize);
        for ai in 0..a.dim(p).unwrap_or(0) {
            let da = a.algebra.degree(a.basis_index(p, ai));
            for xi in 0..x.dim(j).unwrap_or(0) {
                let dx = x.algebra.degree(x.basis_index(j, xi));
                keys.entry(-(da + dx)).or_default().push((p, ai, j, xi));
            }
        }
    }
    let position: BTreeMap<SmallKey, (i32, usize)> = keys
        .iter()
        .flat_map(|(&d, ks)| ks.iter().enumerate().map(move |(i, k)| (*k, (d, i))))
        .collect();
    let mut maps = BTreeMap::new();
    let mut incomplete = Vec::new();
    for (&t, ks) in &keys {
        let target_dim = keys.get(&(t + 1)).map_or(0, |v| v.len());
        let mut m = Matrix::zeros(target_dim, ks.len());
        let mut complete = true;
        for (col, &(p, ai, j, xi)) in ks.iter().enumerate() {
            let (a_next, x_next) = (a.dim(p + 1), x.dim(j + 1));
            if a_next == Some(0) || x_next == Some(0) {
                continue;
            }
            if a_next.is_none() || x_next.is_none() {
                complete = false;
                continue;
            }
            let da = a.algebra.degree(a.basis_index(p, ai));
            let dx = x.algebra.degree(x.basis_index(j, xi));
            for e in 0..n {
                let (de, dstar) = (pres.degrees[e], dual_pres.degrees[e]);
                let (odd1, odd2) = signs(da, dx, de, dstar);
                let (s1, s2) = (sign(odd1), -sign(odd2));
                let terms = [
                    (a.times_word(p, ai, &[e], true)?, x.times_word(j, xi, &[e], true)?, s1),
                    (a.times_word(p, ai, &[e], false)?, x.times_word(j, xi, &[e], false)?, s2),
                ];
                for (pa, px, sg) in terms {
                    for (bi, ca) in pa.iter().enumerate() {
                        if ca.is_zero() {
                            continue;
                        }
                        for (yi, cx) in px.iter().enumerate() {
                            if cx.is_zero() {
                                continue;
                            }
                            let (tt, row) = position[&(p + 1, bi, j + 1, yi)];
                            debug_assert_eq!(tt, t + 1);
                            m.add_to(row, col, &(ca * cx * &sg));
                        }
                    }
                }
            }
        }
        if !complete {
            incomplete.push(t);
        }
        maps.insert(t, m);
    }
    let dims = keys.iter().map(|(&d, v)| (d, v.len())).collect();
    Ok(SmallCochains {
        complex: GradedComplex {
            label: format!("small hochschild cochains, weight shift {s}"),
            step: 1,
            dims,
            maps,
        },
        keys,
        incomplete,
    })
}

/// Both small models, refusing presentations that fail the Koszul test in the window.
#[derive(Debug, Clone)]
pub struct SmallModels {
    pub data: KoszulDualData,
    pub verdict: KoszulVerdict,
}

pub fn small_hochschild_models(pres: &QuadraticPresentation, cutoff: u32) -> Result<SmallModels, KoszulError> {
    let data = koszul_dual_algebra(pres, cutoff)?;
    let verdict = is_koszul(&data)?;
    if let Some(w) = verdict.first_failure() {
        return Err(KoszulError::NotKoszul(w));
    }
    Ok(SmallModels { data, verdict })
}

impl SmallModels {
    /// `dim HH_d` in weight `w` from `(A ⊗ U, b)`.
    pub fn homology_dims(&self, w: u32) -> Result<BTreeMap<i32, usize>, KoszulError> {
        let (cx, _) = small_chain_complex(&self.data, w)?;
        cx.dims.keys().map(|&d| Ok((d, cx.homology_dim(d)?))).collect()
    }

    /// `dim HH^t` at weight shift `s` from `(A ⊗ A^!, δ)`; undetermined degrees are omitted.
    pub fn cohomology_dims(&self, s: i64) -> Result<BTreeMap<i32, usize>, KoszulError> {
        let sc = small_cochain_complex(&self.data, s)?;
        let mut out = BTreeMap::new();
        for &t in sc.complex.dims.keys() {
            if let Some(d) = sc.cohomology_dim(t)? {
                out.insert(t, d);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn polynomial_dual_is_exterior() {
        let d = koszul_dual_algebra(&QuadraticPresentation::polynomial(2), 4).unwrap();
        assert_eq!((0..=4).map(|w| d.source.dim(w).unwrap()).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
        assert!(d.dual.is_finite());
        assert_eq!((0..=4).map(|w| d.dual.dim(w).unwrap()).collect::<Vec<_>>(), vec![1, 2, 1, 0, 0]);
        let x = d.dual.algebra();
        assert_eq!(x.degree(1), -1);
        let (a, b) = (Element::basis(1), Element::basis(2));
        let sum = x.multiply(&a, &b).unwrap();
        let mut sum = sum;
        sum.add_scaled(&q(1), &x.multiply(&b, &a).unwrap());
        assert!(sum.is_zero());
        assert_eq!(x.multiply(&a, &a).unwrap(), Element::zero());
    }

    #[test]
    fn coalgebra_dims() {
        let d = koszul_dual_algebra(&QuadraticPresentation::polynomial(2), 4).unwrap();
        assert_eq!((0..=4).map(|w| d.coalgebra_dim(w)).collect::<Vec<_>>(), vec![1, 2, 1, 0, 0]);
        let e = koszul_dual_algebra(&QuadraticPresentation::exterior(2), 4).unwrap();
        assert_eq!((0..=4).map(|w| e.coalgebra_dim(w)).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
        assert!(e.coalgebra[2].iter().all(|(deg, _)| *deg == -2));
    }

    #[test]
    fn one_variable_without_relations() {
        let p = QuadraticPresentation::new(vec!["x".into()], vec![0], vec![]).unwrap();
        let d = koszul_dual_algebra(&p, 3).unwrap();
        assert_eq!(d.dual.dim(1), Some(1));
        assert_eq!(d.dual.dim(2), Some(0));
        assert_eq!(d.coalgebra_dim(2), 0);
    }

    #[test]
    fn full_relations_give_square_zero() {
        let n = 2;
        let rels = (0..n * n).map(|k| crate::linalg::unit_vec(n * n, k)).collect();
        let p = QuadraticPresentation::new(vec!["a".into(), "b".into()], vec![0, 0], rels).unwrap();
        let d = koszul_dual_algebra(&p, 3).unwrap();
        assert_eq!(d.source.dim(2), Some(0));
        assert_eq!((0..=3).map(|w| d.dual.dim(w).unwrap()).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
        assert!(is_koszul(&d).unwrap().is_koszul_in_window());
    }

    #[test]
    fn koszul_complexes_are_complexes() {
        for pres in [QuadraticPresentation::polynomial(2), QuadraticPresentation::exterior(2)] {
            let d = koszul_dual_algebra(&pres, 4).unwrap();
            for w in 0..=4 {
                assert_eq!(koszul_complex(&d, w).unwrap().square_defect(), None);
            }
            let v = is_koszul(&d).unwrap();
            assert_eq!(v.koszul_up_to(), 4);
        }
    }

    #[test]
    fn polynomial_small_models_weight_zero() {
        let m = small_hochschild_models(&QuadraticPresentation::polynomial(2), 4).unwrap();
        assert_eq!(m.homology_dims(0).unwrap(), BTreeMap::from([(0, 1)]));
        let c = m.cohomology_dims(-2).unwrap();
        assert_eq!(c.get(&2), Some(&1));
        let c0 = m.cohomology_dims(0).unwrap();
        assert_eq!(c0.get(&0), Some(&1));
        let c1 = m.cohomology_dims(-1).unwrap();
        assert_eq!(c1.get(&1), Some(&2));
    }
}
