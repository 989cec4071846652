use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::exact::form::BinForm;
use crate::exact::Field;

/// Sparse polynomial in the ambient coordinates `x_0, …, x_{N}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(field: F, exponents: Vec<u32>, c: F::Elem) -> Self {
        let mut p = Self::zero(field, exponents.len());
        if !field.is_zero(&c) {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn var(field: F, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, e, field.one())
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, e: Vec<u32>, c: F::Elem) {
        let f = self.field;
        if f.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = f.add(x, &c);
                if f.is_zero(x) {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.field;
        let mut out = Self::zero(f, self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), f.mul(x, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field;
        let mut out = Self::zero(f, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, f.mul(c1, c2));
            }
        }
        out
    }

    pub fn partial(&self, var: usize) -> Self {
        let f = self.field;
        let mut out = Self::zero(f, self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, f.mul(c, &f.from_i64(e[var] as i64)));
        }
        out
    }

    /// Degree in each block of consecutive variables, if homogeneous in all.
    pub fn multidegree(&self, blocks: &[usize]) -> Option<Vec<u32>> {
        let mut result: Option<Vec<u32>> = None;
        for e in self.terms.keys() {
            let mut md = Vec::with_capacity(blocks.len());
            let mut start = 0;
            for &b in blocks {
                md.push(e[start..start + b].iter().sum());
                start += b;
            }
            match &result {
                None => result = Some(md),
                Some(r) if *r != md => return None,
                _ => {}
            }
        }
        result
    }

    /// Substitutes binary forms for the variables.
    pub fn pullback(&self, coords: &[BinForm<F>]) -> Result<BinForm<F>> {
        if coords.len() != self.nvars {
            return Err(Error::Shape(alloc::format!("{} coordinates for {} variables", coords.len(), self.nvars)));
        }
        let f = self.field;
        let mut max_exp = vec![0u32; self.nvars];
        for e in self.terms.keys() {
            for (m, x) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(*x);
            }
        }
        let powers: Vec<Vec<BinForm<F>>> = coords
            .iter()
            .zip(&max_exp)
            .map(|(g, &m)| {
                let mut p = vec![BinForm::one(f)];
                for k in 1..=m as usize {
                    p.push(p[k - 1].mul(g));
                }
                p
            })
            .collect();
        let mut acc = BinForm::zero(f);
        for (e, c) in &self.terms {
            let mut term = BinForm::constant(f, c.clone());
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[v][k as usize]);
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Value at a point with coordinates in the field.
    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        let f = self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term = f.mul(&term, x);
                }
            }
            acc = f.add(&acc, &term);
        }
        acc
    }

    /// Rendering with variable names supplied by the caller.
    pub fn render_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let f = self.field;
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut mono = Vec::new();
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => mono.push(names[v].clone()),
                    _ => mono.push(alloc::format!("{}^{k}", names[v])),
                }
            }
            let mono = mono.join("*");
            let coeff = f.render(c);
            let (neg, abs) = match coeff.strip_prefix('-') {
                Some(rest) => (true, String::from(rest)),
                None => (false, coeff),
            };
            if i > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            if mono.is_empty() {
                out.push_str(&abs);
            } else if abs == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&alloc::format!("{abs}*{mono}"));
            }
        }
        out
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| alloc::format!("x{i}")).collect();
        write!(f, "Poly({})", self.render_with(&names))
    }
}

/// Exponent vectors of all monomials of the given multidegree, in
/// lexicographically descending order within each block.
pub fn monomials(blocks: &[usize], multidegree: &[u32]) -> Vec<Vec<u32>> {
    let mut acc: Vec<Vec<u32>> = vec![Vec::new()];
    for (&b, &d) in blocks.iter().zip(multidegree) {
        let block_monos = compositions(b, d);
        let mut next = Vec::with_capacity(acc.len() * block_monos.len());
        for prefix in &acc {
            for m in &block_monos {
                let mut e = prefix.clone();
                e.extend_from_slice(m);
                next.push(e);
            }
        }
        acc = next;
    }
    acc
}

/// Exponent vectors of length `n` summing to `d`, lexicographically descending.
pub fn compositions(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in compositions(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rationals;

    #[test]
    fn pullback_of_quadric_on_twisted_cubic() {
        let f = Rationals;
        let x = |i| Poly::var(f, 4, i);
        // x0 x2 − x1²
        let q = x(0).mul(&x(2)).sub(&x(1).mul(&x(1)));
        let coords: Vec<_> = (0..4).map(|i| BinForm::monomial(f, 3, i, f.one())).collect();
        assert!(q.pullback(&coords).unwrap().is_zero());
        assert_eq!(q.multidegree(&[4]), Some(vec![2]));
        assert_eq!(q.partial(1), x(1).scale(&f.from_i64(-2)));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(&[5], &[3]).len(), 35);
        assert_eq!(monomials(&[3, 3], &[1, 2]).len(), 18);
        assert_eq!(compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn rendering_uses_signs() {
        let f = Rationals;
        let x = |i| Poly::var(f, 3, i);
        let p = x(0).mul(&x(1)).sub(&x(2).mul(&x(2)));
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| String::from(*s)).collect();
        assert_eq!(p.render_with(&names), "a*b - c^2");
    }
}
