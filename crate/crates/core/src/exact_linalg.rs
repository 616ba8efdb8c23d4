//! Exact rational scalars, sparse vectors over ordered keys, and incrementally
//! maintained reduced row-echelon span bases.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Builds `num/den` in lowest terms.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `p/q` text, with `q = 1` spelled out for integers.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Compact form used inside term lists: integers print without a denominator.
pub fn format_rational_short(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format_rational(q)
    }
}

pub fn is_integral(q: &Rational) -> bool {
    q.is_integer()
}

/// A finite association from keys to nonzero rationals, sorted by key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec<K> {
    entries: Vec<(K, Rational)>,
}

impl<K> Default for SparseVec<K> {
    fn default() -> Self {
        SparseVec { entries: Vec::new() }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(key: K) -> Self {
        SparseVec { entries: vec![(key, Rational::one())] }
    }

    pub fn single(key: K, coeff: Rational) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            SparseVec { entries: vec![(key, coeff)] }
        }
    }

    /// Sums duplicate keys and drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (K, Rational)>>(terms: I) -> Self {
        let mut acc: BTreeMap<K, Rational> = BTreeMap::new();
        for (k, c) in terms {
            if c.is_zero() {
                continue;
            }
            match acc.entry(k) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        SparseVec { entries: acc.into_iter().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> + '_ {
        self.entries.iter().map(|(k, c)| (k, c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> + '_ {
        self.entries.iter().map(|(k, _)| k)
    }

    pub fn into_terms(self) -> Vec<(K, Rational)> {
        self.entries
    }

    pub fn get(&self, key: &K) -> Option<&Rational> {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(key))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// Smallest key with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&K, &Rational)> {
        self.entries.first().map(|(k, c)| (k, c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVec {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    /// `self + c * other`, by a sorted merge.
    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ka, va)), Some((kb, vb))) => match ka.cmp(kb) {
                    std::cmp::Ordering::Less => {
                        out.push((ka.clone(), va.clone()));
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        out.push((kb.clone(), vb * c));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        let s = va + vb * c;
                        if !s.is_zero() {
                            out.push((ka.clone(), s));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some((ka, va)), None) => {
                    out.push((ka.clone(), va.clone()));
                    a.next();
                }
                (None, Some((kb, vb))) => {
                    out.push((kb.clone(), vb * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&-Rational::one(), other)
    }

    /// Relabels keys; colliding images are summed.
    pub fn map_keys<L: Ord + Clone, F: FnMut(&K) -> L>(&self, mut f: F) -> SparseVec<L> {
        SparseVec::from_terms(self.entries.iter().map(|(k, c)| (f(k), c.clone())))
    }

    /// Keeps only the entries whose key satisfies `keep`.
    pub fn filter<F: FnMut(&K) -> bool>(&self, mut keep: F) -> Self {
        SparseVec {
            entries: self.entries.iter().filter(|(k, _)| keep(k)).cloned().collect(),
        }
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }
}

/// Exact linear combination `Σ cᵢ vᵢ`.
pub fn linear_combine<K: Ord + Clone>(terms: &[(Rational, SparseVec<K>)]) -> SparseVec<K> {
    SparseVec::from_terms(
        terms
            .iter()
            .flat_map(|(c, v)| v.iter().map(move |(k, x)| (k.clone(), c * x))),
    )
}

impl<K: fmt::Debug> fmt::Debug for SparseVec<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k:?}: {}", format_rational_short(c))?;
        }
        f.write_str("}")
    }
}

/// Reduced row-echelon basis of a subspace. Each row is monic at its pivot
/// (its smallest key) and vanishes at every other row's pivot.
#[derive(Clone, Debug)]
pub struct SpanBasis<K> {
    rows: Vec<SparseVec<K>>,
    pivots: BTreeMap<K, usize>,
}

impl<K> Default for SpanBasis<K> {
    fn default() -> Self {
        SpanBasis { rows: Vec::new(), pivots: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SpanBasis<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SparseVec<K>> {
        self.rows
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &K> + '_ {
        self.pivots.keys()
    }

    pub fn has_pivot(&self, key: &K) -> bool {
        self.pivots.contains_key(key)
    }

    /// Remainder of `v` after elimination against every pivot. Because the rows
    /// are fully reduced, one pass over the pivots met in `v` suffices.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut terms: Vec<(Rational, &SparseVec<K>)> = Vec::new();
        for (k, c) in v.iter() {
            if let Some(&i) = self.pivots.get(k) {
                terms.push((-c.clone(), &self.rows[i]));
            }
        }
        if terms.is_empty() {
            return v.clone();
        }
        let mut out = v.clone();
        for (c, row) in terms {
            out = out.add_scaled(&c, row);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let r = self.reduce(v);
        if r.is_zero() {
            return false;
        }
        let r = r.monic();
        let pivot = r.leading().map(|(k, _)| k.clone()).expect("nonzero row");
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                *row = row.add_scaled(&-c, &r);
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(r);
        true
    }

    /// Inserts every vector; returns how many raised the rank.
    pub fn extend<'a, I>(&mut self, vs: I) -> usize
    where
        I: IntoIterator<Item = &'a SparseVec<K>>,
        K: 'a,
    {
        vs.into_iter().filter(|v| self.insert(v)).count()
    }

    pub fn from_vectors<'a, I>(vs: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec<K>>,
        K: 'a,
    {
        let mut b = Self::new();
        b.extend(vs);
        b
    }

    /// Mutual containment of the two spans.
    pub fn same_span(&self, other: &Self) -> bool {
        self.rank() == other.rank() && other.rows.iter().all(|r| self.contains(r))
    }

    pub fn contains_span(&self, other: &Self) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Dimension of the intersection with the coordinate subspace spanned by
    /// the keys satisfying `inside`.
    pub fn coordinate_intersection_rank<F: Fn(&K) -> bool>(&self, inside: F) -> usize {
        let mut outside = SpanBasis::new();
        for row in &self.rows {
            outside.insert(&row.filter(|k| !inside(k)));
        }
        self.rank() - outside.rank()
    }
}

/// Key of the augmented system used by [`kernel`]: image coordinates sort
/// before the bookkeeping tags.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Augmented<K> {
    Image(K),
    Tag(usize),
}

/// Basis of the linear relations among `images`: each returned vector maps
/// input positions to coefficients with `Σ c_i images[i] = 0`.
pub fn kernel<K: Ord + Clone>(images: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    let mut basis: SpanBasis<Augmented<K>> = SpanBasis::new();
    for (i, v) in images.iter().enumerate() {
        let aug = SparseVec::from_terms(
            v.iter()
                .map(|(k, c)| (Augmented::Image(k.clone()), c.clone()))
                .chain(std::iter::once((Augmented::Tag(i), Rational::one()))),
        );
        basis.insert(&aug);
    }
    basis
        .rows()
        .iter()
        .filter(|row| matches!(row.leading(), Some((Augmented::Tag(_), _))))
        .map(|row| {
            SparseVec::from_terms(row.iter().filter_map(|(k, c)| match k {
                Augmented::Tag(i) => Some((*i, c.clone())),
                Augmented::Image(_) => None,
            }))
        })
        .collect()
}

/// Rank of a family of vectors.
pub fn rank_of<'a, K: Ord + Clone + 'a, I: IntoIterator<Item = &'a SparseVec<K>>>(vs: I) -> usize {
    SpanBasis::from_vectors(vs).rank()
}
