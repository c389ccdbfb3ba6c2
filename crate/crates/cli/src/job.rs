//! Line-oriented job files.
//!
//! ```text
//! # Poisson structure on k[x1, x2, x3]
//! [algebra]
//! kind = polynomial
//! n = 3
//!
//! [poisson]
//! c = 1 2 1 2 1
//! c = 1 3 1 3 -1
//!
//! [window]
//! wmax = 3
//!
//! [tasks]
//! poisson gravity
//! ```
//!
//! Generators are numbered from 1. A Poisson line `c = i1 i2 j1 j2 v` adds
//! `v x_{i1} x_{i2} ∂_{j1} ∧ ∂_{j2}`.

use std::collections::BTreeMap;
use std::fmt;

use hochgrav::algebra::{BasisElement, Commutativity, GradedAlgebra, Product};
use hochgrav::koszul::QuadraticPresentation;
use hochgrav::linalg::{LinComb, Q};
use hochgrav::poisson::QuadKey;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    Hh,
    HcMinus,
    Poisson,
    Gravity,
    Koszul,
    Check,
}

impl Task {
    pub const ALL: [Task; 6] = [Task::Hh, Task::HcMinus, Task::Poisson, Task::Gravity, Task::Koszul, Task::Check];

    pub fn name(self) -> &'static str {
        match self {
            Task::Hh => "hh",
            Task::HcMinus => "hc-minus",
            Task::Poisson => "poisson",
            Task::Gravity => "gravity",
            Task::Koszul => "koszul",
            Task::Check => "check",
        }
    }

    fn parse(s: &str) -> Option<Task> {
        Task::ALL.into_iter().find(|t| t.name() == s)
    }
}

#[derive(Clone, Debug)]
pub enum AlgebraSpec {
    Exterior(usize),
    Polynomial(usize),
    Quadratic(QuadraticPresentation),
    Table(GradedAlgebra),
}

impl AlgebraSpec {
    pub fn generators(&self) -> Option<usize> {
        match self {
            AlgebraSpec::Exterior(n) | AlgebraSpec::Polynomial(n) => Some(*n),
            AlgebraSpec::Quadratic(p) => Some(p.n()),
            AlgebraSpec::Table(_) => None,
        }
    }

    pub fn presentation(&self) -> Option<QuadraticPresentation> {
        match self {
            AlgebraSpec::Exterior(n) => Some(QuadraticPresentation::exterior(*n)),
            AlgebraSpec::Polynomial(n) => Some(QuadraticPresentation::polynomial(*n)),
            AlgebraSpec::Quadratic(p) => Some(p.clone()),
            AlgebraSpec::Table(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub pmax: u32,
    pub wmax: u32,
    pub utrunc: Option<u32>,
    pub nmax: usize,
    pub arity_check: usize,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            pmax: 4,
            wmax: 3,
            utrunc: None,
            nmax: 3,
            arity_check: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub algebra: AlgebraSpec,
    /// Pair with the coefficient of the top basis element.
    pub top_pairing: bool,
    pub poisson: Option<Vec<(QuadKey, Q)>>,
    pub window: Window,
    pub tasks: Vec<Task>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

#[derive(Default)]
struct Raw {
    blocks: BTreeMap<String, Vec<(usize, String)>>,
}

fn split_blocks(text: &str, errors: &mut Vec<ParseError>) -> Raw {
    let mut raw = Raw::default();
    let mut current: Option<String> = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let n = i + 1;
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !["algebra", "poisson", "window", "tasks"].contains(&name.as_str()) {
                errors.push(ParseError { line: n, message: format!("unknown block [{name}]") });
            } else if raw.blocks.contains_key(&name) {
                errors.push(ParseError { line: n, message: format!("block [{name}] appears twice") });
            }
            raw.blocks.entry(name.clone()).or_default();
            current = Some(name);
            continue;
        }
        match &current {
            Some(b) => raw.blocks.get_mut(b).unwrap().push((n, line.to_string())),
            None => errors.push(ParseError { line: n, message: "content before the first block".into() }),
        }
    }
    raw
}

fn key_value(line: usize, s: &str, errors: &mut Vec<ParseError>) -> Option<(String, String)> {
    match s.split_once('=') {
        Some((k, v)) => Some((k.trim().to_string(), v.trim().to_string())),
        None => {
            errors.push(ParseError { line, message: format!("expected `key = value`, found `{s}`") });
            None
        }
    }
}

fn rational(line: usize, s: &str, errors: &mut Vec<ParseError>) -> Option<Q> {
    match s.parse::<Q>() {
        Ok(q) => Some(q),
        Err(_) => {
            errors.push(ParseError { line, message: format!("`{s}` is not an exact rational") });
            None
        }
    }
}

fn number<T: std::str::FromStr>(line: usize, key: &str, s: &str, errors: &mut Vec<ParseError>) -> Option<T> {
    match s.parse::<T>() {
        Ok(v) => Some(v),
        Err(_) => {
            errors.push(ParseError { line, message: format!("{key}: `{s}` is not a valid number") });
            None
        }
    }
}

/// Fields of `[algebra]` that describe a structure-constant table.
#[derive(Default)]
struct TableLines {
    elements: Vec<(usize, String)>,
    products: Vec<(usize, String)>,
    commutative: bool,
}

fn parse_table(t: &TableLines, errors: &mut Vec<ParseError>) -> Option<GradedAlgebra> {
    let mut basis = Vec::new();
    for (line, s) in &t.elements {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 3 {
            errors.push(ParseError { line: *line, message: "element = <label> <degree> <weight>".into() });
            continue;
        }
        let (Some(degree), Some(weight)) = (number(*line, "degree", parts[1], errors), number(*line, "weight", parts[2], errors)) else {
            continue;
        };
        basis.push(BasisElement { label: parts[0].to_string(), degree, weight });
    }
    if basis.is_empty() {
        errors.push(ParseError { line: 0, message: "a table algebra needs at least one `element` line (the first is the unit)".into() });
        return None;
    }
    let index = |label: &str| basis.iter().position(|b| b.label == label);
    let n = basis.len();
    let mut table = vec![vec![Product::Terms(LinComb::zero()); n]; n];
    let mut explicit = vec![vec![false; n]; n];
    for (line, s) in &t.products {
        let Some((lhs, rhs)) = s.split_once("->") else {
            errors.push(ParseError { line: *line, message: "product = <a> <b> -> <c1> <e1> + <c2> <e2> ...".into() });
            continue;
        };
        let f: Vec<&str> = lhs.split_whitespace().collect();
        if f.len() != 2 {
            errors.push(ParseError { line: *line, message: "product needs two factors".into() });
            continue;
        }
        let (Some(i), Some(j)) = (index(f[0]), index(f[1])) else {
            errors.push(ParseError { line: *line, message: format!("unknown element in `{}`", lhs.trim()) });
            continue;
        };
        let mut value = LinComb::zero();
        for term in rhs.split('+').map(str::trim).filter(|t| !t.is_empty() && *t != "0") {
            let parts: Vec<&str> = term.split_whitespace().collect();
            let (c, e) = match parts.as_slice() {
                [e] => (Some(hochgrav::linalg::q(1)), *e),
                [c, e] => (rational(*line, c, errors), *e),
                _ => {
                    errors.push(ParseError { line: *line, message: format!("bad term `{term}`") });
                    continue;
                }
            };
            let Some(k) = index(e) else {
                errors.push(ParseError { line: *line, message: format!("unknown element `{e}`") });
                continue;
            };
            if let Some(c) = c {
                value.add_term(k, c);
            }
        }
        if explicit[i][j] {
            errors.push(ParseError { line: *line, message: format!("product {} {} given twice", f[0], f[1]) });
        }
        explicit[i][j] = true;
        table[i][j] = Product::Terms(value);
    }
    for k in 0..n {
        for (i, j) in [(0, k), (k, 0)] {
            if !explicit[i][j] {
                table[i][j] = Product::Terms(LinComb::basis(k));
            }
        }
    }
    let comm = if t.commutative { Commutativity::GradedCommutative } else { Commutativity::None };
    match GradedAlgebra::new(basis, 0, table, comm, None) {
        Ok(a) => Some(a),
        Err(e) => {
            errors.push(ParseError { line: 0, message: format!("invalid algebra table: {e}") });
            None
        }
    }
}

fn parse_algebra(lines: &[(usize, String)], errors: &mut Vec<ParseError>) -> (Option<AlgebraSpec>, bool) {
    let mut kind: Option<(usize, String)> = None;
    let mut n: Option<(usize, usize)> = None;
    let mut names: Option<Vec<String>> = None;
    let mut degrees: Option<(usize, Vec<i32>)> = None;
    let mut relations: Vec<(usize, Vec<Q>)> = Vec::new();
    let mut table = TableLines::default();
    let mut pairing = false;
    for (line, s) in lines {
        let Some((k, v)) = key_value(*line, s, errors) else { continue };
        match k.as_str() {
            "kind" => kind = Some((*line, v)),
            "n" => n = number(*line, "n", &v, errors).map(|x| (*line, x)),
            "generators" => names = Some(v.split_whitespace().map(String::from).collect()),
            "degrees" => {
                let d: Option<Vec<i32>> = v.split_whitespace().map(|x| number(*line, "degrees", x, errors)).collect();
                degrees = d.map(|d| (*line, d));
            }
            "relation" => {
                let r: Option<Vec<Q>> = v.split_whitespace().map(|x| rational(*line, x, errors)).collect();
                if let Some(r) = r {
                    relations.push((*line, r));
                }
            }
            "element" => table.elements.push((*line, v)),
            "product" => table.products.push((*line, v)),
            "commutative" => table.commutative = matches!(v.as_str(), "true" | "yes"),
            "pairing" => match v.as_str() {
                "top" => pairing = true,
                "none" => pairing = false,
                other => errors.push(ParseError { line: *line, message: format!("unknown pairing `{other}` (expected top or none)") }),
            },
            other => errors.push(ParseError { line: *line, message: format!("unknown algebra field `{other}`") }),
        }
    }
    let Some((kline, kind)) = kind else {
        errors.push(ParseError { line: 0, message: "[algebra] needs a `kind`".into() });
        return (None, pairing);
    };
    let need_n = |errors: &mut Vec<ParseError>| match n {
        Some((_, 0)) | None => {
            errors.push(ParseError { line: kline, message: format!("kind {kind} needs a positive `n`") });
            None
        }
        Some((_, n)) => Some(n),
    };
    let spec = match kind.as_str() {
        "exterior" => need_n(errors).map(AlgebraSpec::Exterior),
        "polynomial" => need_n(errors).map(AlgebraSpec::Polynomial),
        "quadratic" => {
            let names = names.unwrap_or_else(|| (1..=n.map_or(0, |x| x.1)).map(|i| format!("x{i}")).collect());
            let degrees = degrees.map_or_else(|| vec![0; names.len()], |d| d.1);
            let width = names.len() * names.len();
            for (line, r) in &relations {
                if r.len() != width {
                    errors.push(ParseError { line: *line, message: format!("relation needs {width} coefficients, one per word x_i x_j") });
                }
            }
            if names.is_empty() {
                errors.push(ParseError { line: kline, message: "quadratic algebra needs `generators` or `n`".into() });
                None
            } else {
                match QuadraticPresentation::new(names, degrees, relations.into_iter().map(|r| r.1).collect()) {
                    Ok(p) => Some(AlgebraSpec::Quadratic(p)),
                    Err(e) => {
                        errors.push(ParseError { line: kline, message: format!("invalid presentation: {e}") });
                        None
                    }
                }
            }
        }
        "structure-constants" => parse_table(&table, errors).map(AlgebraSpec::Table),
        other => {
            errors.push(ParseError { line: kline, message: format!("unknown algebra kind `{other}`") });
            None
        }
    };
    (spec, pairing)
}

fn parse_poisson(lines: &[(usize, String)], n: Option<usize>, errors: &mut Vec<ParseError>) -> Vec<(QuadKey, Q)> {
    let mut out = Vec::new();
    for (line, s) in lines {
        let Some((k, v)) = key_value(*line, s, errors) else { continue };
        if k != "c" {
            errors.push(ParseError { line: *line, message: format!("unknown poisson field `{k}`") });
            continue;
        }
        let parts: Vec<&str> = v.split_whitespace().collect();
        if parts.len() != 5 {
            errors.push(ParseError { line: *line, message: "c = i1 i2 j1 j2 <coefficient>".into() });
            continue;
        }
        let mut key = [0usize; 4];
        let mut ok = true;
        for (slot, p) in key.iter_mut().zip(&parts[..4]) {
            match p.parse::<usize>() {
                Ok(i) if i >= 1 && n.is_none_or(|n| i <= n) => *slot = i - 1,
                _ => {
                    errors.push(ParseError { line: *line, message: format!("generator index {p} out of range 1..={}", n.unwrap_or(0)) });
                    ok = false;
                }
            }
        }
        if let (true, Some(c)) = (ok, rational(*line, parts[4], errors)) {
            out.push((key, c));
        }
    }
    out
}

fn parse_window(lines: &[(usize, String)], errors: &mut Vec<ParseError>) -> Window {
    let mut w = Window::default();
    for (line, s) in lines {
        let Some((k, v)) = key_value(*line, s, errors) else { continue };
        match k.as_str() {
            "pmax" => w.pmax = number(*line, &k, &v, errors).unwrap_or(w.pmax),
            "wmax" => w.wmax = number(*line, &k, &v, errors).unwrap_or(w.wmax),
            "utrunc" => w.utrunc = number(*line, &k, &v, errors).or(w.utrunc),
            "nmax" => w.nmax = number(*line, &k, &v, errors).unwrap_or(w.nmax),
            "arity_check" | "arity-check" => w.arity_check = number(*line, &k, &v, errors).unwrap_or(w.arity_check),
            other => errors.push(ParseError { line: *line, message: format!("unknown window field `{other}`") }),
        }
    }
    validate_window(&w, errors);
    w
}

pub fn validate_window(w: &Window, errors: &mut Vec<ParseError>) {
    if w.wmax == 0 || w.pmax == 0 || w.utrunc == Some(0) {
        errors.push(ParseError { line: 0, message: "windows must be positive".into() });
    }
    if w.nmax < 2 {
        errors.push(ParseError { line: 0, message: "nmax must be at least 2".into() });
    }
}

pub fn parse_job(text: &str) -> Result<JobSpec, Vec<ParseError>> {
    let mut errors = Vec::new();
    let raw = split_blocks(text, &mut errors);
    let empty = Vec::new();
    let block = |name: &str| raw.blocks.get(name).unwrap_or(&empty);
    let (algebra, top_pairing) = if raw.blocks.contains_key("algebra") {
        parse_algebra(block("algebra"), &mut errors)
    } else {
        errors.push(ParseError { line: 0, message: "missing [algebra] block".into() });
        (None, false)
    };
    let poisson = raw
        .blocks
        .contains_key("poisson")
        .then(|| parse_poisson(block("poisson"), algebra.as_ref().and_then(AlgebraSpec::generators), &mut errors));
    if poisson.is_some() && !matches!(algebra, Some(AlgebraSpec::Exterior(_) | AlgebraSpec::Polynomial(_)) | None) {
        errors.push(ParseError { line: 0, message: "a [poisson] block needs kind polynomial or exterior".into() });
    }
    let window = parse_window(block("window"), &mut errors);
    let mut tasks = Vec::new();
    for (line, s) in block("tasks") {
        for t in s.split_whitespace() {
            match Task::parse(t) {
                Some(t) if !tasks.contains(&t) => tasks.push(t),
                Some(_) => {}
                None => errors.push(ParseError { line: *line, message: format!("unknown task `{t}`") }),
            }
        }
    }
    match (errors.is_empty(), algebra) {
        (true, Some(algebra)) => Ok(JobSpec { algebra, top_pairing, poisson, window, tasks }),
        _ => Err(errors),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_exterior_job() {
        let j = parse_job("[algebra]\nkind = exterior\nn = 2\n[tasks]\nhh\n").unwrap();
        assert!(matches!(j.algebra, AlgebraSpec::Exterior(2)));
        assert_eq!(j.tasks, vec![Task::Hh]);
        assert_eq!(j.window, Window::default());
    }

    #[test]
    fn fractional_coefficient_is_exact() {
        let j = parse_job("[algebra]\nkind = polynomial\nn = 2\n[poisson]\nc = 1 2 1 2 1/3\n").unwrap();
        let c = &j.poisson.unwrap()[0];
        assert_eq!(c.0, [0, 1, 0, 1]);
        assert_eq!(c.1, hochgrav::linalg::qf(1, 3));
    }

    #[test]
    fn index_out_of_range_is_named() {
        let e = parse_job("[algebra]\nkind = polynomial\nn = 2\n[poisson]\nc = 1 3 1 2 1\n").unwrap_err();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].line, 5);
        assert!(e[0].message.contains("index 3"), "{}", e[0].message);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_job("[algebra]\nkind = exterior\nn = 2\n[window]\nwmax = x\n[tasks]\nhh frobnicate\n").unwrap_err();
        let lines: Vec<usize> = e.iter().map(|e| e.line).collect();
        assert_eq!(lines, vec![5, 7]);
    }

    #[test]
    fn non_rational_coefficient_is_refused() {
        let e = parse_job("[algebra]\nkind = polynomial\nn = 2\n[poisson]\nc = 1 2 1 2 0.5\n").unwrap_err();
        assert!(e[0].message.contains("exact rational"));
    }

    #[test]
    fn structure_constant_table() {
        let text = "[algebra]\nkind = structure-constants\nelement = 1 0 0\nelement = e 1 1\nproduct = e e -> 0\ncommutative = true\npairing = top\n";
        let j = parse_job(text).unwrap();
        let AlgebraSpec::Table(a) = j.algebra else { panic!() };
        assert_eq!(a.dim(), 2);
        assert!(j.top_pairing);
    }

    #[test]
    fn quadratic_presentation() {
        let text = "[algebra]\nkind = quadratic\ngenerators = x y\nrelation = 0 1 -2 0\n";
        let j = parse_job(text).unwrap();
        assert_eq!(j.algebra.presentation().unwrap().relations().len(), 1);
    }
}
