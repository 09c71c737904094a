//! Flag f- and h-vectors, and the noncommutative ab- and cd-polynomials that
//! encode them.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_traits::Num;
use thiserror::Error;

use crate::exactnum::{format_rational, Rational};
use crate::polytope::FaceLattice;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error("ab-polynomial is not expressible in c = a+b, d = ab+ba (residual {0})")]
    NotCdExpressible(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("cannot parse word `{0}`")]
    ParseWord(String),
}

pub trait Letter: Copy + Ord + Hash + fmt::Debug + 'static {
    const ALL: &'static [Self];
    fn weight(self) -> usize;
    fn symbol(self) -> char;
    fn from_symbol(c: char) -> Option<Self>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ab {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cd {
    C,
    D,
}

impl Letter for Ab {
    const ALL: &'static [Self] = &[Ab::A, Ab::B];
    fn weight(self) -> usize {
        1
    }
    fn symbol(self) -> char {
        match self {
            Ab::A => 'a',
            Ab::B => 'b',
        }
    }
    fn from_symbol(c: char) -> Option<Self> {
        match c {
            'a' => Some(Ab::A),
            'b' => Some(Ab::B),
            _ => None,
        }
    }
}

impl Letter for Cd {
    const ALL: &'static [Self] = &[Cd::C, Cd::D];
    fn weight(self) -> usize {
        match self {
            Cd::C => 1,
            Cd::D => 2,
        }
    }
    fn symbol(self) -> char {
        match self {
            Cd::C => 'c',
            Cd::D => 'd',
        }
    }
    fn from_symbol(c: char) -> Option<Self> {
        match c {
            'c' => Some(Cd::C),
            'd' => Some(Cd::D),
            _ => None,
        }
    }
}

/// A word in noncommuting letters. Ordered lexicographically, letter by
/// letter, so `c < d` and `a < b`. The empty word prints as `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word<L>(Vec<L>);

pub type AbWord = Word<Ab>;
pub type CdWord = Word<Cd>;

impl<L: Letter> Word<L> {
    pub fn new(letters: Vec<L>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[L] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|l| l.weight()).sum()
    }

    pub fn count(&self, letter: L) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    pub fn reversed(&self) -> Self {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn prefixed(&self, letter: L) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn appended(&self, letter: L) -> Self {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn concat(&self, other: &Self) -> Self {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// The prefix left after removing `suffix`, if the word ends with it.
    pub fn strip_suffix(&self, suffix: &Self) -> Option<Self> {
        self.0.strip_suffix(suffix.0.as_slice()).map(|p| Word(p.to_vec()))
    }
}

impl<L: Letter> fmt::Display for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl<L: Letter> fmt::Debug for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<L: Letter> FromStr for Word<L> {
    type Err = FlagError;
    fn from_str(s: &str) -> Result<Self, FlagError> {
        let t = s.trim();
        if t == "1" || t.is_empty() {
            return Ok(Word::empty());
        }
        t.chars()
            .map(|c| L::from_symbol(c).ok_or_else(|| FlagError::ParseWord(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// Homogeneous-or-not polynomial in noncommuting letters, with zero
/// coefficients never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPoly<L, K = i64> {
    terms: BTreeMap<Word<L>, K>,
}

pub type AbPoly = NcPoly<Ab, i64>;
pub type CdPoly = NcPoly<Cd, i64>;
/// cd-polynomial with rational coefficients (half-integer contributions).
pub type CdPolyQ = NcPoly<Cd, Rational>;

impl<L: Letter, K: Num + Clone> Default for NcPoly<L, K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<L: Letter, K: Num + Clone> NcPoly<L, K> {
    pub fn zero() -> Self {
        NcPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Word::empty(), K::one())
    }

    pub fn monomial(w: Word<L>, k: K) -> Self {
        let mut p = Self::zero();
        p.add_term(w, k);
        p
    }

    pub fn word(s: &str) -> Result<Self, FlagError> {
        Ok(Self::monomial(s.parse()?, K::one()))
    }

    pub fn add_term(&mut self, w: Word<L>, k: K) {
        if k.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(k);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + k;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, w: &Word<L>) -> K {
        self.terms.get(w).cloned().unwrap_or_else(K::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word<L>, &K)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms; `None` for the zero polynomial or a
    /// nonhomogeneous one.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(Word::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, k: &K) -> Self {
        let mut p = Self::zero();
        for (w, c) in &self.terms {
            p.add_term(w.clone(), c.clone() * k.clone());
        }
        p
    }

    /// `letter · self`.
    pub fn prefixed(&self, letter: L) -> Self {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.prefixed(letter), c.clone())).collect(),
        }
    }

    /// `self · letter`.
    pub fn appended(&self, letter: L) -> Self {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.appended(letter), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                p.add_term(u.concat(v), a.clone() * b.clone());
            }
        }
        p
    }

    pub fn map_coeffs<K2: Num + Clone>(&self, f: impl Fn(&K) -> K2) -> NcPoly<L, K2> {
        let mut p = NcPoly::zero();
        for (w, c) in &self.terms {
            p.add_term(w.clone(), f(c));
        }
        p
    }

    pub fn reverse_words(&self) -> Self {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.reversed(), c.clone())).collect(),
        }
    }
}

impl<L: Letter> NcPoly<L, i64> {
    pub fn to_rational(&self) -> NcPoly<L, Rational> {
        self.map_coeffs(|&c| crate::exactnum::rat(c))
    }

    /// JSON object mapping word strings to integer coefficients.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.terms
                .iter()
                .map(|(w, c)| (w.to_string(), serde_json::Value::from(*c)))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, FlagError> {
        let obj = v.as_object().ok_or_else(|| FlagError::ParseWord(v.to_string()))?;
        let mut p = Self::zero();
        for (k, c) in obj {
            let c = c.as_i64().ok_or_else(|| FlagError::ParseWord(c.to_string()))?;
            p.add_term(k.parse()?, c);
        }
        Ok(p)
    }
}

impl<L: Letter> NcPoly<L, Rational> {
    /// Integer coefficients, if every coefficient is integral.
    pub fn to_integer(&self) -> Option<NcPoly<L, i64>> {
        let mut p = NcPoly::zero();
        for (w, c) in &self.terms {
            if !c.is_integer() {
                return None;
            }
            p.add_term(w.clone(), i64::try_from(c.to_integer()).ok()?);
        }
        Some(p)
    }

    /// JSON object mapping word strings to `"p/q"` coefficient strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.terms
                .iter()
                .map(|(w, c)| (w.to_string(), serde_json::Value::from(format_rational(c))))
                .collect(),
        )
    }
}

impl<L: Letter, K: Num + Clone> Add for &NcPoly<L, K> {
    type Output = NcPoly<L, K>;
    fn add(self, rhs: Self) -> NcPoly<L, K> {
        let mut p = self.clone();
        p += rhs;
        p
    }
}

impl<L: Letter, K: Num + Clone> Add for NcPoly<L, K> {
    type Output = NcPoly<L, K>;
    fn add(mut self, rhs: Self) -> NcPoly<L, K> {
        self += &rhs;
        self
    }
}

impl<L: Letter, K: Num + Clone> AddAssign<&NcPoly<L, K>> for NcPoly<L, K> {
    fn add_assign(&mut self, rhs: &NcPoly<L, K>) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl<L: Letter, K: Num + Clone> Neg for &NcPoly<L, K> {
    type Output = NcPoly<L, K>;
    fn neg(self) -> NcPoly<L, K> {
        self.map_coeffs(|c| K::zero() - c.clone())
    }
}

impl<L: Letter, K: Num + Clone> Sub for &NcPoly<L, K> {
    type Output = NcPoly<L, K>;
    fn sub(self, rhs: Self) -> NcPoly<L, K> {
        self + &(-rhs)
    }
}

impl<L: Letter, K: Num + Clone> std::iter::Sum for NcPoly<L, K> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

impl<L: Letter, K: Num + Clone + fmt::Display> fmt::Display for NcPoly<L, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{w}")?;
            } else if w.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{w}")?;
            }
        }
        Ok(())
    }
}

impl<L: Letter, K: Num + Clone + fmt::Display> fmt::Debug for NcPoly<L, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<L: Letter, K: Num + Clone> FromStr for NcPoly<L, K>
where
    K: FromStr,
{
    type Err = FlagError;

    /// Parses sums like `"ccc + 6*cd + 4*dc"`; a bare number is a multiple
    /// of the empty word.
    fn from_str(s: &str) -> Result<Self, FlagError> {
        let mut p = Self::zero();
        let bad = || FlagError::ParseWord(s.to_string());
        for term in s.split('+').map(str::trim).filter(|t| !t.is_empty()) {
            if term == "0" {
                continue;
            }
            let (k, w) = match term.split_once('*') {
                Some((k, w)) => (k.trim().parse().map_err(|_| bad())?, w.trim().parse()?),
                None => match term.parse::<K>() {
                    Ok(k) => (k, Word::empty()),
                    Err(_) => (K::one(), term.parse()?),
                },
            };
            p.add_term(w, k);
        }
        Ok(p)
    }
}

/// Subset of `{0, ..., d-1}` as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetS(pub u32);

impl SubsetS {
    pub fn from_elems(elems: &[usize]) -> Self {
        SubsetS(elems.iter().fold(0, |m, &i| m | 1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn elems(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    pub fn complement(self, d: usize) -> Self {
        SubsetS(!self.0 & ((1u32 << d) - 1))
    }

    /// `w_S`: letter `i` is `b` iff `i ∈ S`.
    pub fn ab_word(self, d: usize) -> AbWord {
        Word((0..d).map(|i| if self.contains(i) { Ab::B } else { Ab::A }).collect())
    }
}

/// A function on subsets of `{0, ..., d-1}`; used for both flag f and flag h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagVector {
    d: usize,
    values: Vec<i64>,
}

impl FlagVector {
    pub fn new(d: usize, values: Vec<i64>) -> Self {
        assert_eq!(values.len(), 1 << d);
        FlagVector { d, values }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, s: SubsetS) -> i64 {
        self.values[s.0 as usize]
    }

    pub fn at(&self, elems: &[usize]) -> i64 {
        self.get(SubsetS::from_elems(elems))
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetS, i64)> + '_ {
        self.values.iter().enumerate().map(|(s, &v)| (SubsetS(s as u32), v))
    }

    /// Map from subsets written as `"{0,2}"` to values.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.iter()
                .map(|(s, v)| {
                    let key = format!("{{{}}}", s.elems().iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
                    (key, serde_json::Value::from(v))
                })
                .collect(),
        )
    }
}

/// Counts `S`-chains for every `S ⊆ {0, ..., d-1}`.
pub fn flag_f(l: &FaceLattice) -> FlagVector {
    let d = l.dim();
    let mut values = vec![0i64; 1 << d];
    for (mask, slot) in values.iter_mut().enumerate() {
        let dims = SubsetS(mask as u32).elems();
        let Some((&first, rest)) = dims.split_first() else {
            *slot = 1;
            continue;
        };
        let mut layer: Vec<(crate::polytope::VertexSet, i64)> = l
            .faces_of_dim(first as i32)
            .iter()
            .map(|&f| (l.vertices_of(f), 1))
            .collect();
        for &k in rest {
            layer = l
                .faces_of_dim(k as i32)
                .iter()
                .map(|&g| {
                    let vg = l.vertices_of(g);
                    let n = layer.iter().filter(|(vf, _)| vf.is_subset(vg)).map(|(_, c)| c).sum();
                    (vg, n)
                })
                .collect();
        }
        *slot = layer.iter().map(|(_, c)| c).sum();
    }
    FlagVector { d, values }
}

/// Inclusion–exclusion over subsets: `h_S = Σ_{T⊆S} (-1)^{|S-T|} f_T`.
pub fn flag_h(f: &FlagVector) -> FlagVector {
    let values = (0..f.values.len() as u32)
        .map(|s| {
            let mut total = 0i64;
            let mut t = s;
            loop {
                let sign = if (s & !t).count_ones() % 2 == 0 { 1 } else { -1 };
                total += sign * f.values[t as usize];
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
            total
        })
        .collect();
    FlagVector { d: f.d, values }
}

pub fn ab_index(h: &FlagVector) -> AbPoly {
    let mut p = AbPoly::zero();
    for (s, v) in h.iter() {
        p.add_term(s.ab_word(h.d), v);
    }
    p
}

/// All cd-words of degree `d` in lexicographic order (`c < d`).
pub fn cd_words(d: usize) -> Vec<CdWord> {
    fn go(rem: usize, cur: &mut Vec<Cd>, out: &mut Vec<CdWord>) {
        if rem == 0 {
            out.push(Word(cur.clone()));
            return;
        }
        cur.push(Cd::C);
        go(rem - 1, cur, out);
        cur.pop();
        if rem >= 2 {
            cur.push(Cd::D);
            go(rem - 2, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, &mut Vec::new(), &mut out);
    out
}

/// Number of cd-words of degree `d`: the Fibonacci numbers 1, 1, 2, 3, 5, ...
pub fn count_cd_words(d: usize) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 0..d {
        (a, b) = (b, a + b);
    }
    a
}

/// `c ↦ a`, `d ↦ ab`. Injective, and lexicographically triangular with
/// respect to [`expand_cd_word`].
fn marker(w: &CdWord) -> AbWord {
    let mut v = Vec::with_capacity(w.degree());
    for &l in w.letters() {
        match l {
            Cd::C => v.push(Ab::A),
            Cd::D => v.extend([Ab::A, Ab::B]),
        }
    }
    Word(v)
}

/// `c ↦ a + b`, `d ↦ ab + ba`, fully expanded.
pub fn expand_cd_word(w: &CdWord) -> Vec<AbWord> {
    let mut acc: Vec<Vec<Ab>> = vec![Vec::new()];
    for &l in w.letters() {
        let pieces: &[&[Ab]] = match l {
            Cd::C => &[&[Ab::A], &[Ab::B]],
            Cd::D => &[&[Ab::A, Ab::B], &[Ab::B, Ab::A]],
        };
        acc = acc
            .iter()
            .flat_map(|prefix| {
                pieces.iter().map(move |piece| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(piece);
                    v
                })
            })
            .collect();
    }
    acc.into_iter().map(Word).collect()
}

pub fn ab_from_cd<K: Num + Clone>(phi: &NcPoly<Cd, K>) -> NcPoly<Ab, K> {
    let mut p = NcPoly::zero();
    for (w, c) in phi.terms() {
        for u in expand_cd_word(w) {
            p.add_term(u, c.clone());
        }
    }
    p
}

/// The unique cd-polynomial whose expansion is `psi`, by triangular
/// elimination over cd-words in lexicographic order: expanding a word `w`
/// only ever hits the marker of `w` itself or of lexicographically larger
/// words, so the residual coefficient of `marker(w)` is exactly the
/// coefficient of `w`.
pub fn cd_from_ab<K: Num + Clone + fmt::Display>(psi: &NcPoly<Ab, K>) -> Result<NcPoly<Cd, K>, FlagError> {
    if psi.is_zero() {
        return Ok(NcPoly::zero());
    }
    let d = psi.homogeneous_degree().ok_or(FlagError::NotHomogeneous)?;
    let mut residual = psi.clone();
    let mut phi = NcPoly::zero();
    for w in cd_words(d) {
        let k = residual.coeff(&marker(&w));
        if k.is_zero() {
            continue;
        }
        for u in expand_cd_word(&w) {
            residual.add_term(u, K::zero() - k.clone());
        }
        phi.add_term(w, k);
    }
    if residual.is_zero() {
        Ok(phi)
    } else {
        Err(FlagError::NotCdExpressible(residual.to_string()))
    }
}

pub fn reverse_words<K: Num + Clone>(phi: &NcPoly<Cd, K>) -> NcPoly<Cd, K> {
    phi.reverse_words()
}

/// cd-index of a lattice by the flag route: flag f → flag h → ab → cd.
pub fn cd_index(l: &FaceLattice) -> Result<CdPoly, FlagError> {
    cd_from_ab(&ab_index(&flag_h(&flag_f(l))))
}
