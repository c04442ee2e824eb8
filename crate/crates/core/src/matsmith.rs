//! Matrices over `H` and their Smith normal form.
//!
//! `H` is an elementary divisor domain, so every matrix reduces to
//! `diag(d₁, …, d_r, 0, …)` with `d_i | d_{i+1}` by unimodular row and column
//! operations. Gcds are brought to the pivot with 2×2 blocks
//! `[[u, v], [−b/g, a/g]]` of determinant one built from Bezout identities.

use std::fmt;

use crate::error::{Error, Result};
use crate::hring::{h_bezout, h_divides, HElement, Unit};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<HElement>,
}

impl HMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<HElement>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(HMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<HElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        HMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        HMatrix { rows, cols, entries: vec![HElement::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = HMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, HElement::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &HElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: HElement) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[HElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<HElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(HElement::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> HMatrix {
        let mut t = HMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Exact determinant by cofactor expansion.
    pub fn det(&self) -> Result<HElement> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let idx: Vec<usize> = (0..self.cols).collect();
        Ok(self.minor_det(0, &idx))
    }

    fn minor_det(&self, row: usize, cols: &[usize]) -> HElement {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = HElement::zero();
        for (k, &c) in cols.iter().enumerate() {
            let e = self.get(row, c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = e * &self.minor_det(row + 1, &rest);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row_t += f·row_s`.
    fn add_row(&mut self, t: usize, s: usize, f: &HElement) {
        for j in 0..self.cols {
            let v = self.get(t, j) + &(f * self.get(s, j));
            self.set(t, j, v);
        }
    }

    fn add_col(&mut self, t: usize, s: usize, f: &HElement) {
        for i in 0..self.rows {
            let v = self.get(i, t) + &(self.get(i, s) * f);
            self.set(i, t, v);
        }
    }

    /// Rows `(i, j) ← [[p, q], [r, s]]·(row_i, row_j)`.
    fn row_block(&mut self, i: usize, j: usize, b: &[HElement; 4]) {
        for c in 0..self.cols {
            let (x, y) = (self.get(i, c).clone(), self.get(j, c).clone());
            self.set(i, c, &(&b[0] * &x) + &(&b[1] * &y));
            self.set(j, c, &(&b[2] * &x) + &(&b[3] * &y));
        }
    }

    /// Columns `(i, j) ← (col_i, col_j)·[[p, r], [q, s]]`.
    fn col_block(&mut self, i: usize, j: usize, b: &[HElement; 4]) {
        for r in 0..self.rows {
            let (x, y) = (self.get(r, i).clone(), self.get(r, j).clone());
            self.set(r, i, &(&x * &b[0]) + &(&y * &b[1]));
            self.set(r, j, &(&x * &b[2]) + &(&y * &b[3]));
        }
    }

    fn scale_row(&mut self, i: usize, f: &HElement) {
        for c in 0..self.cols {
            let v = f * self.get(i, c);
            self.set(i, c, v);
        }
    }
}

impl fmt::Display for HMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            let row: Vec<String> = self.row(i).iter().map(HElement::to_expr_string).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, "]")
    }
}

pub fn mat_mul(a: &HMatrix, b: &HMatrix) -> Result<HMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = HMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = HElement::zero();
            for k in 0..a.cols {
                let (x, y) = (a.get(i, k), b.get(k, j));
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Accepts when the determinant is a unit `c·σ^k`; otherwise returns the
/// normalized determinant.
pub fn is_unimodular(v: &HMatrix) -> Result<std::result::Result<Unit, HElement>> {
    let d = v.det()?;
    if d.is_unit() {
        Ok(Ok(d.unit().clone()))
    } else {
        Ok(Err(d))
    }
}

/// One elementary step of the reduction, recorded for replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmithStep {
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    /// `row_target += factor·row_source`
    AddRow { target: usize, source: usize, factor: HElement },
    /// `col_target += col_source·factor`
    AddCol { target: usize, source: usize, factor: HElement },
    /// Rows `(i, j)` replaced by `[[u, v], [−b/g, a/g]]·(row_i, row_j)`.
    RowBlock { i: usize, j: usize, block: [HElement; 4] },
    /// Columns `(i, j)` replaced by `(col_i, col_j)·[[u, −b/g], [v, a/g]]`.
    ColBlock { i: usize, j: usize, block: [HElement; 4] },
    /// `row_i *= unit` (removes the unit of a diagonal entry).
    ScaleRow { i: usize, unit: Unit },
}

#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub v: HMatrix,
    pub d: HMatrix,
    pub w: HMatrix,
    pub rank: usize,
    pub steps: Vec<SmithStep>,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries `d₁, …, d_r`.
    pub fn invariant_factors(&self) -> Vec<HElement> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Replays every claim: `V·P·W = D`, diagonal shape, divisibility chain and
    /// unimodularity of `V` and `W`.
    pub fn verify(&self, p: &HMatrix) -> Result<bool> {
        let vpw = mat_mul(&mat_mul(&self.v, p)?, &self.w)?;
        if vpw != self.d || !self.d.is_diagonal() {
            return Ok(false);
        }
        let n = self.d.rows.min(self.d.cols);
        for i in 0..n {
            if (i < self.rank) == self.d.get(i, i).is_zero() {
                return Ok(false);
            }
        }
        for i in 1..self.rank {
            if h_divides(self.d.get(i - 1, i - 1), self.d.get(i, i)).is_err() {
                return Ok(false);
            }
        }
        Ok(is_unimodular(&self.v)?.is_ok() && is_unimodular(&self.w)?.is_ok())
    }

    /// Applies the recorded steps to `P`, returning `D`.
    pub fn replay(&self, p: &HMatrix) -> HMatrix {
        let mut m = p.clone();
        for s in &self.steps {
            apply_step(&mut m, s);
        }
        m
    }
}

fn apply_step(m: &mut HMatrix, s: &SmithStep) {
    match s {
        SmithStep::SwapRows(a, b) => m.swap_rows(*a, *b),
        SmithStep::SwapCols(a, b) => m.swap_cols(*a, *b),
        SmithStep::AddRow { target, source, factor } => m.add_row(*target, *source, factor),
        SmithStep::AddCol { target, source, factor } => m.add_col(*target, *source, factor),
        SmithStep::RowBlock { i, j, block } => m.row_block(*i, *j, block),
        SmithStep::ColBlock { i, j, block } => m.col_block(*i, *j, block),
        SmithStep::ScaleRow { i, unit } => m.scale_row(*i, &HElement::from_unit(unit)),
    }
}

struct Reducer {
    m: HMatrix,
    v: HMatrix,
    w: HMatrix,
    steps: Vec<SmithStep>,
}

impl Reducer {
    fn apply(&mut self, s: SmithStep) {
        apply_step(&mut self.m, &s);
        match &s {
            SmithStep::SwapRows(..)
            | SmithStep::AddRow { .. }
            | SmithStep::RowBlock { .. }
            | SmithStep::ScaleRow { .. } => apply_step(&mut self.v, &s),
            _ => apply_step(&mut self.w, &s),
        }
        self.steps.push(s);
    }

    /// Clears column `t` below the pivot. Returns true if a Bezout block was used.
    fn clear_column(&mut self, t: usize) -> Result<bool> {
        let mut changed = false;
        for i in t + 1..self.m.rows {
            let b = self.m.get(i, t).clone();
            if b.is_zero() {
                continue;
            }
            let a = self.m.get(t, t).clone();
            if let Ok(q) = h_divides(&a, &b) {
                self.apply(SmithStep::AddRow { target: i, source: t, factor: -&q });
            } else {
                let tr = h_bezout(&a, &b)?;
                let block = [tr.u, tr.v, -&h_divides(&tr.g, &b)?, h_divides(&tr.g, &a)?];
                self.apply(SmithStep::RowBlock { i: t, j: i, block });
                changed = true;
            }
        }
        Ok(changed)
    }

    fn clear_row(&mut self, t: usize) -> Result<bool> {
        let mut changed = false;
        for j in t + 1..self.m.cols {
            let b = self.m.get(t, j).clone();
            if b.is_zero() {
                continue;
            }
            let a = self.m.get(t, t).clone();
            if let Ok(q) = h_divides(&a, &b) {
                self.apply(SmithStep::AddCol { target: j, source: t, factor: -&q });
            } else {
                let tr = h_bezout(&a, &b)?;
                let block = [tr.u, tr.v, -&h_divides(&tr.g, &b)?, h_divides(&tr.g, &a)?];
                self.apply(SmithStep::ColBlock { i: t, j, block });
                changed = true;
            }
        }
        Ok(changed)
    }
}

const MAX_ROUNDS: usize = 64;

/// Smith normal form `V·P·W = diag(d₁, …, d_r, 0, …)` with unit-free `d_i`.
pub fn smith(p: &HMatrix) -> Result<SmithDecomposition> {
    let mut r = Reducer {
        m: p.clone(),
        v: HMatrix::identity(p.rows),
        w: HMatrix::identity(p.cols),
        steps: Vec::new(),
    };
    let n = p.rows.min(p.cols);
    let mut rank = 0;
    for t in 0..n {
        // pivot: smallest σ-span, then coefficient degree
        let mut best: Option<(usize, usize)> = None;
        for i in t..p.rows {
            for j in t..p.cols {
                let e = r.m.get(i, j);
                if e.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| e.size_key() < r.m.get(bi, bj).size_key()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        if bi != t {
            r.apply(SmithStep::SwapRows(t, bi));
        }
        if bj != t {
            r.apply(SmithStep::SwapCols(t, bj));
        }
        let mut rounds = 0;
        loop {
            rounds += 1;
            if rounds > MAX_ROUNDS {
                return Err(Error::Internal("Smith reduction did not stabilize".into()));
            }
            let c = r.clear_column(t)?;
            let rr = r.clear_row(t)?;
            if c || rr {
                continue;
            }
            if (t + 1..p.rows).any(|i| !r.m.get(i, t).is_zero()) {
                continue;
            }
            let piv = r.m.get(t, t).clone();
            let bad = (t + 1..p.rows).find(|&i| {
                (t + 1..p.cols).any(|j| h_divides(&piv, r.m.get(i, j)).is_err())
            });
            match bad {
                Some(i) => r.apply(SmithStep::AddRow { target: t, source: i, factor: HElement::one() }),
                None => break,
            }
        }
        let piv = r.m.get(t, t).clone();
        if !piv.unit().is_one() {
            r.apply(SmithStep::ScaleRow { i: t, unit: piv.unit().inv() });
        }
        rank = t + 1;
    }
    Ok(SmithDecomposition { v: r.v, d: r.m, w: r.w, rank, steps: r.steps })
}
