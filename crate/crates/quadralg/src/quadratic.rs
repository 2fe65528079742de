//! Quadratic-algebra operations: presentations, the relation subspaces
//! W_n = sum_i V^i R V^(n-2-i), graded dimensions, quadratic duals via
//! intersection chains, associated-graded (chop) presentations, the
//! cyclic-eigenbasis change of coordinates, and finite-degree Koszulness
//! certificates.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;

use crate::fastrank::{m31_reduce, M31};
use crate::field::{Cyclotomic, Field, PrimeField, Rationals, DEFAULT_PRIME};
use crate::linalg::{poly_to_vec, rank_integer, GradedComponent, Subspace};
use crate::poly::Poly;
use crate::word::{GenSet, Word};
use crate::Error;

/// A quadratic presentation: generators with weights and degree-2
/// homogeneous relations over an exact field.
#[derive(Clone, Debug)]
pub struct Presentation<F: Field = Rationals> {
    pub field: F,
    pub gens: GenSet,
    pub relations: Vec<Poly<F>>,
    /// Enables the weakly-decreasing weight-vector reduction in the
    /// Koszul certificate (valid for the triangle-algebra family).
    pub k3_like: bool,
}

impl<F: Field> Presentation<F> {
    pub fn new(field: F, gens: GenSet, relations: Vec<Poly<F>>) -> Result<Self, Error> {
        for r in &relations {
            if r.is_zero() {
                return Err(Error::Invalid("zero relation".into()));
            }
            if r.homogeneous_degree() != Some(2) {
                return Err(Error::Invalid(
                    "relations must be homogeneous of tensor degree 2".into(),
                ));
            }
        }
        Ok(Presentation {
            field,
            gens,
            relations,
            k3_like: false,
        })
    }

    pub fn with_k3_like(mut self) -> Self {
        self.k3_like = true;
        self
    }

    /// A linearly independent spanning set for the relation space, in
    /// canonical (RREF) form.
    pub fn canonical_relations(&self) -> Result<Vec<Poly<F>>, Error> {
        Ok(self.relation_space()?.basis_polys())
    }

    /// The relation span R as a subspace of V tensor V.
    pub fn relation_space(&self) -> Result<Subspace<F>, Error> {
        let ambient = Arc::new(GradedComponent::full(&self.gens, 2));
        Subspace::span(self.field.clone(), ambient, &self.relations)
    }

    /// True when every relation is slot-weight homogeneous, so all
    /// weight-graded computations may decompose by weight vector.
    pub fn weight_decomposable(&self) -> bool {
        self.relations.iter().all(|r| slot_weights(&self.gens, r).is_some())
    }
}

impl Presentation<Rationals> {
    pub fn to_prime(&self, field: PrimeField) -> Result<Presentation<PrimeField>, Error> {
        let relations = self
            .relations
            .iter()
            .map(|r| r.to_prime(field))
            .collect::<Result<Vec<_>, _>>()?;
        let mut p = Presentation::new(field, self.gens.clone(), relations)?;
        p.k3_like = self.k3_like;
        Ok(p)
    }
}

/// The common per-slot weight pair of a degree-2 polynomial, if its terms
/// agree on one.
fn slot_weights<F: Field>(gens: &GenSet, r: &Poly<F>) -> Option<(u32, u32)> {
    let mut out = None;
    for (w, _) in r.iter() {
        let pair = (gens.weight(w.0[0]), gens.weight(w.0[1]));
        match out {
            None => out = Some(pair),
            Some(p) if p == pair => {}
            _ => return None,
        }
    }
    out
}

/// All weight vectors of length n over the distinct generator weights.
pub fn weight_vectors(gens: &GenSet, n: usize) -> Vec<Vec<u32>> {
    let weights = gens.weights();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        out.push(idx.iter().map(|&i| weights[i]).collect());
        let mut slot = n;
        loop {
            if slot == 0 {
                return out;
            }
            slot -= 1;
            idx[slot] += 1;
            if idx[slot] < weights.len() {
                break;
            }
            idx[slot] = 0;
        }
    }
}

pub fn weakly_decreasing(v: &[u32]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// The subspace V^i (x) R (x) V^(n-2-i) inside the given ambient component.
/// For a weight-restricted ambient every relation must be slot-weight
/// homogeneous; relations whose slot weights do not match slots i, i+1
/// contribute nothing.
pub fn sandwich_subspace<F: Field>(
    field: &F,
    relations: &[Poly<F>],
    ambient: &Arc<GradedComponent>,
    i: usize,
) -> Result<Subspace<F>, Error> {
    let n = ambient.degree();
    if n < 2 || i > n - 2 {
        return Err(Error::Invalid(format!(
            "sandwich position {} out of range for degree {}",
            i, n
        )));
    }
    let gens = ambient.gens();
    let wopt = ambient.weight();
    let prefix = GradedComponent::new(gens, i, wopt.map(|w| w[..i].to_vec()))?;
    let suffix = GradedComponent::new(gens, n - i - 2, wopt.map(|w| w[i + 2..].to_vec()))?;
    let mut rows = Vec::new();
    for r in relations {
        if let Some(w) = wopt {
            let sw = slot_weights(gens, r).ok_or_else(|| {
                Error::Invalid("weight-restricted sandwich needs slot-weight homogeneous relations".into())
            })?;
            if sw != (w[i], w[i + 1]) {
                continue;
            }
        }
        for ui in 0..prefix.dim() {
            let u = prefix.word_at(ui);
            for vi in 0..suffix.dim() {
                let v = suffix.word_at(vi);
                rows.push(poly_to_vec(field, ambient, &r.sandwich(&u, &v))?);
            }
        }
    }
    Ok(Subspace::from_rows(field.clone(), ambient.clone(), rows))
}

/// W_n = sum_i V^i R V^(n-2-i) in the given ambient component; the zero
/// subspace for n < 2 by convention.
pub fn relation_subspace<F: Field>(
    pres: &Presentation<F>,
    n: usize,
    weight: Option<Vec<u32>>,
) -> Result<Subspace<F>, Error> {
    let ambient = Arc::new(GradedComponent::new(&pres.gens, n, weight)?);
    if n < 2 {
        return Ok(Subspace::zero(pres.field.clone(), ambient));
    }
    let mut acc = Subspace::zero(pres.field.clone(), ambient.clone());
    for i in 0..=n - 2 {
        acc = acc.sum(&sandwich_subspace(&pres.field, &pres.relations, &ambient, i)?)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Fast mod-p ranks of W_n over the full tensor power, via the block-echelon
// recursion W_n = V (x) W_{n-1} + R (x) V^(n-2): the first summand is block
// diagonal in the leading letter, so only the R (x) V^(n-2) rows need
// elimination work at each degree.
// ---------------------------------------------------------------------------

struct BlockEchelon {
    p: u64,
    gsize: usize,
    dim: usize,
    base: Option<Box<BlockEchelon>>,
    pivot_of_col: Vec<Option<usize>>,
    rows: Vec<Vec<u64>>,
}

impl BlockEchelon {
    fn new(p: u64, gsize: usize, degree: usize, base: Option<Box<BlockEchelon>>) -> Self {
        let dim = gsize.pow(degree as u32);
        if let Some(b) = &base {
            assert_eq!(b.dim * gsize, dim);
        }
        BlockEchelon {
            p,
            gsize,
            dim,
            base,
            pivot_of_col: vec![None; dim],
            rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len() + self.base.as_ref().map_or(0, |b| self.gsize * b.rank())
    }

    /// Reduces `y` to its residue modulo the row space: first per-block
    /// against the degree-(k-1) echelon, then against the extra rows. A
    /// single ascending column pass suffices because every stored row has
    /// zeros before its pivot and at all block-pivot columns.
    fn reduce(&self, y: &mut [u64]) {
        if let Some(base) = &self.base {
            let sub = base.dim;
            for x in 0..self.gsize {
                base.reduce(&mut y[x * sub..(x + 1) * sub]);
            }
        }
        let mersenne = self.p == M31;
        for c in 0..self.dim {
            if y[c] == 0 {
                continue;
            }
            if let Some(idx) = self.pivot_of_col[c] {
                let f = self.p - y[c];
                let row = &self.rows[idx];
                if mersenne {
                    for k in c..self.dim {
                        let v = row[k];
                        if v != 0 {
                            y[k] = m31_reduce(y[k] + f * v);
                        }
                    }
                } else {
                    for k in c..self.dim {
                        let v = row[k];
                        if v != 0 {
                            y[k] = ((y[k] as u128 + f as u128 * v as u128) % self.p as u128) as u64;
                        }
                    }
                }
            }
        }
    }

    /// Returns true when the row was independent and became a new pivot row.
    fn insert(&mut self, mut y: Vec<u64>) -> bool {
        self.reduce(&mut y);
        let c = match y.iter().position(|&v| v != 0) {
            Some(c) => c,
            None => return false,
        };
        let fp = PrimeField::new(self.p);
        let inv = fp.inv(&y[c]);
        for v in y.iter_mut().skip(c) {
            if *v != 0 {
                *v = fp.mul(v, &inv);
            }
        }
        self.pivot_of_col[c] = Some(self.rows.len());
        self.rows.push(y);
        true
    }
}

/// dim W_k over F_p for k = 0..=n_max, on the full tensor powers.
pub fn wn_dims_mod_p(
    gens: &GenSet,
    relations: &[Poly<Rationals>],
    n_max: usize,
    p: u64,
) -> Result<Vec<usize>, Error> {
    let g = gens.len();
    let fp = PrimeField::new(p);
    let comp2 = GradedComponent::full(gens, 2);
    // sparse degree-2 coordinates of each relation
    let rel_coords: Vec<Vec<(usize, u64)>> = relations
        .iter()
        .map(|r| {
            let v = poly_to_vec(&fp, &comp2, &r.to_prime(fp)?)?;
            Ok(v.into_iter().enumerate().filter(|&(_, c)| c != 0).collect())
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let mut dims = vec![0usize; n_max + 1];
    if n_max < 2 {
        return Ok(dims);
    }
    let mut engine = BlockEchelon::new(p, g, 2, None);
    for coords in &rel_coords {
        let mut row = vec![0u64; g * g];
        for &(i, c) in coords {
            row[i] = c;
        }
        engine.insert(row);
    }
    dims[2] = engine.rank();
    for k in 3..=n_max {
        let mut next = BlockEchelon::new(p, g, k, Some(Box::new(engine)));
        let suffix_dim = g.pow((k - 2) as u32);
        for coords in &rel_coords {
            for vidx in 0..suffix_dim {
                let mut row = vec![0u64; next.dim];
                for &(i2, c) in coords {
                    row[i2 * suffix_dim + vidx] = c;
                }
                next.insert(row);
            }
        }
        dims[k] = next.rank();
        engine = next;
    }
    Ok(dims)
}

/// dim W_n over Q by integer fraction-free elimination (exact; use for
/// small n to confirm the mod-p ranks).
pub fn wn_dim_rational(gens: &GenSet, relations: &[Poly<Rationals>], n: usize) -> Result<usize, Error> {
    if n < 2 {
        return Ok(0);
    }
    let g = gens.len();
    let comp2 = GradedComponent::full(gens, 2);
    // clear denominators: scale each relation to integer coordinates
    let rel_coords: Vec<Vec<(usize, i128)>> = relations
        .iter()
        .map(|r| {
            let v = poly_to_vec(&Rationals, &comp2, r)?;
            let mut lcm = BigInt::one();
            for c in &v {
                lcm = lcm.lcm(c.denom());
            }
            Ok(v.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| {
                    let scaled = c.numer() * (&lcm / c.denom());
                    (i, scaled.to_i128().expect("relation coefficient fits i128"))
                })
                .collect())
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let cols = g.pow(n as u32);
    let mut rows = Vec::new();
    for i in 0..=n - 2 {
        let prefix_dim = g.pow(i as u32);
        let suffix_dim = g.pow((n - 2 - i) as u32);
        for coords in &rel_coords {
            for u in 0..prefix_dim {
                for v in 0..suffix_dim {
                    let mut row = vec![0i128; cols];
                    for &(i2, c) in coords {
                        row[(u * g * g + i2) * suffix_dim + v] += c;
                    }
                    rows.push(row);
                }
            }
        }
    }
    Ok(rank_integer(rows))
}

/// Graded dimensions dim A_k = |V|^k - dim W_k for k = 0..=n_max,
/// with ranks taken mod the default prime.
pub fn graded_dims(pres: &Presentation<Rationals>, n_max: usize) -> Result<Vec<u128>, Error> {
    let wn = wn_dims_mod_p(&pres.gens, &pres.relations, n_max, DEFAULT_PRIME)?;
    let g = pres.gens.len() as u128;
    Ok((0..=n_max)
        .map(|k| g.pow(k as u32) - wn[k] as u128)
        .collect())
}

pub fn graded_dim(pres: &Presentation<Rationals>, n: usize) -> Result<u128, Error> {
    Ok(*graded_dims(pres, n)?.last().expect("nonempty"))
}

// ---------------------------------------------------------------------------
// Quadratic dual
// ---------------------------------------------------------------------------

/// The dual presentation: dual generators and a basis of the annihilator
/// R-perp inside V* (x) V* (coordinatewise pairing on pure tensors).
#[derive(Clone, Debug)]
pub struct DualPresentation<F: Field = Rationals> {
    pub gens: GenSet,
    pub relations: Vec<Poly<F>>,
}

pub fn quadratic_dual<F: Field>(pres: &Presentation<F>) -> Result<DualPresentation<F>, Error> {
    let f = &pres.field;
    let ambient = Arc::new(GradedComponent::full(&pres.gens, 2));
    let space = pres.relation_space()?;
    let n = ambient.dim();
    let pivots: Vec<usize> = space
        .rows()
        .iter()
        .map(|r| r.iter().position(|v| !f.is_zero(v)).expect("nonzero row"))
        .collect();
    let dual_gens = GenSet::new(
        pres.gens
            .iter()
            .map(|g| (format!("{}'", g.label), g.weight))
            .collect(),
    );
    let dual_ambient = GradedComponent::full(&dual_gens, 2);
    let mut relations = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        // v[free] = 1, v[pivot_j] = -row_j[free] annihilates every RREF row
        let mut p = Poly::monomial(f.clone(), dual_ambient.word_at(free), f.one());
        for (row, &pc) in space.rows().iter().zip(&pivots) {
            p.add_term(dual_ambient.word_at(pc), f.neg(&row[free]));
        }
        relations.push(p);
    }
    Ok(DualPresentation {
        gens: dual_gens,
        relations,
    })
}

/// Dual graded dimensions dim A!_n = dim of the intersection over i of
/// V^i (x) R (x) V^(n-2-i), computed per weight component when possible.
pub fn dual_dims<F: Field>(
    field: &F,
    gens: &GenSet,
    relations: &[Poly<F>],
    n_max: usize,
) -> Result<Vec<u128>, Error> {
    let decompose = gens.weights().len() > 1
        && relations.iter().all(|r| slot_weights(gens, r).is_some());
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n == 0 {
            out.push(1);
            continue;
        }
        if n == 1 {
            out.push(gens.len() as u128);
            continue;
        }
        let components: Vec<Option<Vec<u32>>> = if decompose {
            weight_vectors(gens, n).into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        let mut total = 0u128;
        for weight in components {
            let ambient = Arc::new(GradedComponent::new(gens, n, weight)?);
            let mut inter: Option<Subspace<F>> = None;
            for i in 0..=n - 2 {
                let s = sandwich_subspace(field, relations, &ambient, i)?;
                inter = Some(match inter {
                    None => s,
                    Some(acc) => acc.intersect(&s)?,
                });
                if inter.as_ref().map_or(false, |s| s.dim() == 0) {
                    break;
                }
            }
            total += inter.map_or(0, |s| s.dim()) as u128;
        }
        out.push(total);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// chop (associated graded presentation)
// ---------------------------------------------------------------------------

/// Replaces each relation by the sum of its terms of maximal total weight,
/// then re-canonicalizes the list.
pub fn chop(pres: &Presentation<Rationals>) -> Result<Presentation<Rationals>, Error> {
    let gens = &pres.gens;
    let chopped: Vec<Poly<Rationals>> = pres
        .relations
        .iter()
        .map(|r| {
            let top = r.iter().map(|(w, _)| w.weight(gens)).max().expect("nonzero");
            Poly::from_terms(
                Rationals,
                r.iter()
                    .filter(|(w, _)| w.weight(gens) == top)
                    .map(|(w, c)| (w.clone(), c.clone())),
            )
        })
        .collect();
    let canon = Presentation::new(Rationals, gens.clone(), chopped)?.canonical_relations()?;
    let mut out = Presentation::new(Rationals, gens.clone(), canon)?;
    out.k3_like = pres.k3_like;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Eigenbasis for the cyclic symmetry
// ---------------------------------------------------------------------------

/// Rewrites a triangle-type presentation (generators a, b, c of weight 1 and
/// d, e, f of weight 2, relations invariant under the cyclic substitution
/// a->b->c->a, d->e->f->d) in the eigenbasis u1, uw, uw2, v1, v2, v3 of that
/// symmetry, over Q(w). Errors when the relation span is not invariant.
pub fn eigenbasis(pres: &Presentation<Rationals>) -> Result<Presentation<Cyclotomic>, Error> {
    let gens = &pres.gens;
    let id = |label: &str| {
        gens.by_label(label)
            .ok_or_else(|| Error::Invalid(format!("eigenbasis needs generator '{}'", label)))
    };
    let (a, b, c, d, e, f) = (id("a")?, id("b")?, id("c")?, id("d")?, id("e")?, id("f")?);
    let tau = |x: u8| -> u8 {
        match x {
            _ if x == a => b,
            _ if x == b => c,
            _ if x == c => a,
            _ if x == d => e,
            _ if x == e => f,
            _ => d,
        }
    };

    // T-invariance of the span
    let space = pres.relation_space()?;
    for r in &pres.relations {
        let image = Poly::from_terms(
            Rationals,
            r.iter().map(|(w, cf)| (Word(w.0.iter().map(|&x| tau(x)).collect()), cf.clone())),
        );
        if !space.contains(&image)? {
            return Err(Error::Invalid(
                "relation span is not invariant under the cyclic symmetry".into(),
            ));
        }
    }

    let cyc = Cyclotomic;
    let new_gens = GenSet::new(vec![
        ("u1".to_string(), 2),
        ("uw".to_string(), 2),
        ("uw2".to_string(), 2),
        ("v1".to_string(), 1),
        ("v2".to_string(), 1),
        ("v3".to_string(), 1),
    ]);
    let (u1, uw, uw2) = (0u8, 1u8, 2u8);
    let (v1, v2, v3) = (3u8, 4u8, 5u8);

    // inverse discrete Fourier transform: with u1 = d+e+f, uw = d+w e+w^2 f,
    // uw2 = d+w^2 e+w f (and the same for v over a, b, c),
    //   d = (u1 + uw + uw2)/3, e = (u1 + w^2 uw + w uw2)/3,
    //   f = (u1 + w uw + w^2 uw2)/3.
    let third = cyc.from_ratio(1, 3);
    let w1 = cyc.omega();
    let w2 = cyc.mul(&w1, &w1);
    let one = cyc.one();
    let linear = |ids: [u8; 3], coeffs: [&crate::field::CycElem; 3]| {
        Poly::from_terms(
            cyc,
            ids.iter()
                .zip(coeffs)
                .map(|(&g, cf)| (Word::single(g), cyc.mul(cf, &third))),
        )
    };
    let mut subst: Vec<Poly<Cyclotomic>> = vec![Poly::zero(cyc); gens.len()];
    subst[d as usize] = linear([u1, uw, uw2], [&one, &one, &one]);
    subst[e as usize] = linear([u1, uw, uw2], [&one, &w2, &w1]);
    subst[f as usize] = linear([u1, uw, uw2], [&one, &w1, &w2]);
    subst[a as usize] = linear([v1, v2, v3], [&one, &one, &one]);
    subst[b as usize] = linear([v1, v2, v3], [&one, &w2, &w1]);
    subst[c as usize] = linear([v1, v2, v3], [&one, &w1, &w2]);

    let mut relations = Vec::new();
    for r in &pres.relations {
        let mut out = Poly::zero(cyc);
        for (wd, cf) in r.iter() {
            let prod = subst[wd.0[0] as usize].mul(&subst[wd.0[1] as usize])?;
            out = out.add(&prod.scale(&cyc.embed(cf)));
        }
        relations.push(out);
    }
    Presentation::new(cyc, new_gens, relations)
}

// ---------------------------------------------------------------------------
// Koszul certificate
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct CertCell {
    pub n: usize,
    pub a: usize,
    pub weight: Option<Vec<u32>>,
    pub dim_x: usize,
    pub dim_y: usize,
    pub dim_z: usize,
    pub median_left: usize,
    pub median_right: usize,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct KoszulReport {
    pub n_max: usize,
    pub reduced: bool,
    pub cells: Vec<CertCell>,
    pub primal_dims: Vec<u128>,
    pub dual_dims: Vec<u128>,
    pub duality: Vec<BigInt>,
    pub duality_pass: bool,
    pub cells_pass: bool,
    pub all_pass: bool,
}

impl KoszulReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "verified_through": self.n_max,
            "reduced_weight_enumeration": self.reduced,
            "cells": self.cells.iter().map(|c| json!({
                "n": c.n,
                "a": c.a,
                "weight": c.weight,
                "dims": {
                    "X": c.dim_x,
                    "Y": c.dim_y,
                    "Z": c.dim_z,
                    "median_left": c.median_left,
                    "median_right": c.median_right,
                },
                "pass": c.pass,
            })).collect::<Vec<_>>(),
            "primal_dims": self.primal_dims.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "dual_dims": self.dual_dims.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "duality_convolution": self.duality.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "duality_pass": self.duality_pass,
            "cells_pass": self.cells_pass,
            "all_pass": self.all_pass,
        })
    }
}

/// Tests the distributive-triple condition on
///   X = intersection over i < a-1 of V^i R V^(n-2-i),
///   Y = V^(a-1) R V^(n-a-1),
///   Z = sum over i >= a of V^i R V^(n-2-i)
/// for every n in 4..=n_max, a in 2..=n-2, across weight components, and
/// runs the Hilbert duality convolution check. Distributivity is only ever
/// certified through n_max; nothing is claimed beyond it.
pub fn koszul_certificate(
    pres: &Presentation<Rationals>,
    n_max: usize,
    reduced: bool,
) -> Result<KoszulReport, Error> {
    assert!(n_max >= 4, "certificate needs n_max >= 4");
    let field = Rationals;
    let decompose = pres.weight_decomposable() && pres.gens.weights().len() > 1;
    let mut cells = Vec::new();
    for n in 4..=n_max {
        for a in 2..=n - 2 {
            let components: Vec<Option<Vec<u32>>> = if decompose {
                weight_vectors(&pres.gens, n)
                    .into_iter()
                    .filter(|w| !(reduced && pres.k3_like) || weakly_decreasing(w))
                    .map(Some)
                    .collect()
            } else {
                vec![None]
            };
            for weight in components {
                let ambient = Arc::new(GradedComponent::new(&pres.gens, n, weight.clone())?);
                let mut x: Option<Subspace<Rationals>> = None;
                for i in 0..=a - 2 {
                    let s = sandwich_subspace(&field, &pres.relations, &ambient, i)?;
                    x = Some(match x {
                        None => s,
                        Some(acc) => acc.intersect(&s)?,
                    });
                }
                let x = x.expect("a >= 2");
                let y = sandwich_subspace(&field, &pres.relations, &ambient, a - 1)?;
                let mut z = Subspace::zero(field, ambient.clone());
                for i in a..=n - 2 {
                    z = z.sum(&sandwich_subspace(&field, &pres.relations, &ambient, i)?)?;
                }
                let lower = x.intersect(&y)?.sum(&y.intersect(&z)?)?.sum(&z.intersect(&x)?)?;
                let upper = x.sum(&y)?.intersect(&y.sum(&z)?)?.intersect(&z.sum(&x)?)?;
                cells.push(CertCell {
                    n,
                    a,
                    weight,
                    dim_x: x.dim(),
                    dim_y: y.dim(),
                    dim_z: z.dim(),
                    median_left: lower.dim(),
                    median_right: upper.dim(),
                    pass: lower == upper,
                });
            }
        }
    }
    let primal = graded_dims(pres, n_max)?;
    let dual = dual_dims(&Rationals, &pres.gens, &pres.relations, n_max)?;
    let duality: Vec<BigInt> = (0..=n_max)
        .map(|n| {
            (0..=n)
                .map(|j| {
                    let term = BigInt::from(primal[n - j]) * BigInt::from(dual[j]);
                    if j % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        })
        .collect();
    let duality_pass = duality
        .iter()
        .enumerate()
        .all(|(n, v)| if n == 0 { v.is_one() } else { v.is_zero() });
    let cells_pass = cells.iter().all(|c| c.pass);
    Ok(KoszulReport {
        n_max,
        reduced,
        cells,
        primal_dims: primal,
        dual_dims: dual,
        duality,
        duality_pass,
        cells_pass,
        all_pass: cells_pass && duality_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;
    use crate::parse::parse_poly;

    #[test]
    fn w2_and_w1_dimensions() {
        let pres = graphs::k3_fixture();
        assert_eq!(relation_subspace(&pres, 2, None).unwrap().dim(), 5);
        assert_eq!(relation_subspace(&pres, 1, None).unwrap().dim(), 0);
        assert_eq!(relation_subspace(&pres, 0, None).unwrap().dim(), 0);
    }

    #[test]
    fn w3_dimension_is_59_in_all_arithmetics() {
        let pres = graphs::k3_fixture();
        assert_eq!(relation_subspace(&pres, 3, None).unwrap().dim(), 59);
        assert_eq!(wn_dim_rational(&pres.gens, &pres.relations, 3).unwrap(), 59);
        let dims = wn_dims_mod_p(&pres.gens, &pres.relations, 3, DEFAULT_PRIME).unwrap();
        assert_eq!(dims, vec![0, 0, 5, 59]);
    }

    #[test]
    fn graded_dims_match_frozen_counts() {
        let pres = graphs::k3_fixture();
        assert_eq!(graded_dims(&pres, 4).unwrap(), vec![1, 6, 31, 157, 793]);
        let gr = graphs::gr_k3_fixture();
        assert_eq!(graded_dims(&gr, 4).unwrap(), vec![1, 6, 31, 157, 793]);
    }

    #[test]
    fn degree3_intersection_in_weight_221() {
        let pres = graphs::gr_k3_fixture();
        let ambient = Arc::new(GradedComponent::new(&pres.gens, 3, Some(vec![2, 2, 1])).unwrap());
        let rv = sandwich_subspace(&Rationals, &pres.relations, &ambient, 0).unwrap();
        let vr = sandwich_subspace(&Rationals, &pres.relations, &ambient, 1).unwrap();
        let inter = rv.intersect(&vr).unwrap();
        assert_eq!(inter.dim(), 1);
        // spanned by r4(b - c) + r5(c - a)
        let g = &pres.gens;
        let r4 = parse_poly(g, "d*e - e*d - f*d + f*e").unwrap();
        let r5 = parse_poly(g, "d*f - f*d - e*d + e*f").unwrap();
        let bc = parse_poly(g, "b - c").unwrap();
        let ca = parse_poly(g, "c - a").unwrap();
        let x = r4.mul(&bc).unwrap().add(&r5.mul(&ca).unwrap());
        assert!(inter.contains(&x).unwrap());
    }

    #[test]
    fn chop_matches_gr_fixture() {
        let pres = graphs::k3_fixture();
        let chopped = chop(&pres).unwrap();
        let g = &pres.gens;
        let r1c = chop(&Presentation::new(
            Rationals,
            g.clone(),
            vec![parse_poly(g, "d*b - d*a + a*b - b*a").unwrap()],
        )
        .unwrap())
        .unwrap();
        assert_eq!(r1c.relations, vec![parse_poly(g, "d*a - d*b").unwrap()]);
        let gr = graphs::gr_k3_fixture();
        assert_eq!(
            chopped.relation_space().unwrap(),
            gr.relation_space().unwrap()
        );
        // idempotence
        let again = chop(&chopped).unwrap();
        assert_eq!(
            again.relation_space().unwrap(),
            chopped.relation_space().unwrap()
        );
    }

    #[test]
    fn gr_dual_dims_frozen() {
        let gr = graphs::gr_k3_fixture();
        let dims = dual_dims(&Rationals, &gr.gens, &gr.relations, 5).unwrap();
        assert_eq!(dims, vec![1, 6, 5, 1, 0, 0]);
    }

    #[test]
    fn dual_dims_trivial_cases() {
        let g = GenSet::new(vec![
            ("x".to_string(), 1),
            ("y".to_string(), 1),
            ("z".to_string(), 1),
        ]);
        // free algebra: dual dims 1, k, 0, 0, ...
        let free: Vec<Poly<Rationals>> = vec![];
        assert_eq!(dual_dims(&Rationals, &g, &free, 4).unwrap(), vec![1, 3, 0, 0, 0]);
        // R = all of V (x) V: dual is the tensor algebra
        let full = Presentation::new(
            Rationals,
            g.clone(),
            Subspace::full(Rationals, Arc::new(GradedComponent::full(&g, 2))).basis_polys(),
        )
        .unwrap();
        assert_eq!(
            dual_dims(&Rationals, &g, &full.relations, 4).unwrap(),
            vec![1, 3, 9, 27, 81]
        );
    }

    #[test]
    fn dual_presentation_annihilates_relations() {
        let pres = graphs::gr_k3_fixture();
        let dual = quadratic_dual(&pres).unwrap();
        assert_eq!(dual.relations.len(), 36 - 5);
        let comp = GradedComponent::full(&pres.gens, 2);
        let dual_comp = GradedComponent::full(&dual.gens, 2);
        for r in &pres.relations {
            let rv = poly_to_vec(&Rationals, &comp, r).unwrap();
            for s in &dual.relations {
                let sv = poly_to_vec(&Rationals, &dual_comp, s).unwrap();
                let pairing: num_rational::BigRational =
                    rv.iter().zip(&sv).map(|(x, y)| x * y).sum();
                assert!(pairing.is_zero());
            }
        }
    }

    #[test]
    fn eigenbasis_frozen_span_facts() {
        let gr = graphs::gr_k3_fixture();
        let eig = eigenbasis(&gr).unwrap();
        let space = eig.relation_space().unwrap();
        assert_eq!(space.dim(), 5);
        // with d = u1, e = uw, f = uw2: f^2 - 2de + ed and e^2 - 2df + fd
        // lie in the span; the sign variant f^2 - 2de - ed does not
        let g = &eig.gens;
        let parse = |s: &str| {
            let q = parse_poly(
                &GenSet::new(g.iter().map(|x| (x.label.clone(), x.weight)).collect()),
                s,
            )
            .unwrap();
            q.to_cyclotomic()
        };
        let r4 = parse("uw2*uw2 - 2*u1*uw + uw*u1");
        let r5 = parse("uw*uw - 2*u1*uw2 + uw2*u1");
        let wrong = parse("uw2*uw2 - 2*u1*uw - uw*u1");
        assert!(space.contains(&r4).unwrap());
        assert!(space.contains(&r5).unwrap());
        assert!(!space.contains(&wrong).unwrap());
    }

    #[test]
    fn eigenbasis_rejects_non_invariant_presentations() {
        let g = graphs::k3_fixture().gens;
        let pres = Presentation::new(
            Rationals,
            g.clone(),
            vec![parse_poly(&g, "a*b").unwrap()],
        )
        .unwrap();
        assert!(eigenbasis(&pres).is_err());
    }

    #[test]
    fn gr_certificate_passes_reduced_and_full() {
        let gr = graphs::gr_k3_fixture();
        let reduced = koszul_certificate(&gr, 5, true).unwrap();
        assert!(reduced.all_pass, "reduced cells: {:?}", reduced.cells.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        let full = koszul_certificate(&gr, 5, false).unwrap();
        assert!(full.all_pass);
        assert!(full.cells.len() > reduced.cells.len());
        assert_eq!(
            reduced.duality,
            vec![
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(0)
            ]
        );
    }

    #[test]
    fn free_algebra_certificate_vacuous() {
        let g = GenSet::new(vec![("x".to_string(), 1), ("y".to_string(), 1)]);
        let pres = Presentation::new(Rationals, g, vec![]).unwrap();
        let report = koszul_certificate(&pres, 4, false).unwrap();
        assert!(report.all_pass);
    }

    #[test]
    fn non_koszul_fixture_fails_duality() {
        let g = GenSet::new(vec![
            ("x".to_string(), 1),
            ("y".to_string(), 1),
            ("z".to_string(), 1),
        ]);
        let pres = Presentation::new(
            Rationals,
            g.clone(),
            vec![
                parse_poly(&g, "x*y").unwrap(),
                parse_poly(&g, "y*z - x*x").unwrap(),
            ],
        )
        .unwrap();
        let report = koszul_certificate(&pres, 4, false).unwrap();
        assert!(!report.duality_pass);
        assert_eq!(report.duality[4], BigInt::from(2));
        assert!(!report.all_pass);
    }

    #[test]
    fn field_agreement_through_degree_4() {
        let pres = graphs::gr_k3_fixture();
        let fp = PrimeField::new(DEFAULT_PRIME);
        let modp = pres.to_prime(fp).unwrap();
        let dq = dual_dims(&Rationals, &pres.gens, &pres.relations, 4).unwrap();
        let dp = dual_dims(&fp, &modp.gens, &modp.relations, 4).unwrap();
        assert_eq!(dq, dp);
        for n in 2..=4 {
            assert_eq!(
                wn_dim_rational(&pres.gens, &pres.relations, n).unwrap(),
                wn_dims_mod_p(&pres.gens, &pres.relations, n, DEFAULT_PRIME).unwrap()[n]
            );
        }
    }
}
