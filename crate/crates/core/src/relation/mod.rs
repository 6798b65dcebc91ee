//! Binary relations over small universes of alternatives.
//!
//! A relation on at most [`MAX_ALTERNATIVES`] alternatives is stored as one
//! bitmask row per alternative: bit `y` of `rows[x]` is set when `x R y`.
//! Every value is `Copy` and immutable in practice; all operations return new
//! relations.

mod enumerate;
mod text;

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use enumerate::{catalog, enumerate, incomplete_strict_catalog};

/// Hard cap on universe size for enumeration, scoring and datasets.
pub const MAX_ALTERNATIVES: usize = 7;

/// An alternative, identified by its index in the universe.
/// Serialized as its letter label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlternativeId(u8);

impl Serialize for AlternativeId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.label())
    }
}

impl AlternativeId {
    pub fn new(index: usize, n: usize) -> Result<Self> {
        if index >= n || index >= MAX_ALTERNATIVES {
            return Err(Error::AlternativeOutOfRange { index, n });
        }
        Ok(AlternativeId(index as u8))
    }

    pub(crate) const fn from_index(index: usize) -> Self {
        AlternativeId(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Letter label: `A` for index 0, `B` for index 1, ...
    pub fn label(self) -> char {
        (b'A' + self.0) as char
    }

    pub fn from_label(label: &str) -> Result<Self> {
        let mut chars = label.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c @ 'A'..='Z'), None) if ((c as u8 - b'A') as usize) < MAX_ALTERNATIVES => {
                Ok(AlternativeId(c as u8 - b'A'))
            }
            _ => Err(Error::UnknownLabel(label.to_string())),
        }
    }
}

impl fmt::Display for AlternativeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A set of alternatives as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AltSet(u8);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);

    pub const fn from_bits(bits: u8) -> Self {
        AltSet(bits)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    /// All alternatives `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 8);
        AltSet(((1u16 << n) - 1) as u8)
    }

    pub fn singleton(x: AlternativeId) -> Self {
        AltSet(1 << x.0)
    }

    pub fn contains(self, x: AlternativeId) -> bool {
        self.0 & (1 << x.0) != 0
    }

    pub fn insert(&mut self, x: AlternativeId) {
        self.0 |= 1 << x.0;
    }

    pub fn remove(&mut self, x: AlternativeId) {
        self.0 &= !(1 << x.0);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: AltSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: AltSet) -> AltSet {
        AltSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AltSet) -> AltSet {
        AltSet(self.0 & other.0)
    }

    pub fn difference(self, other: AltSet) -> AltSet {
        AltSet(self.0 & !other.0)
    }

    /// Members in ascending index order.
    pub fn iter(self) -> impl Iterator<Item = AlternativeId> {
        let bits = self.0;
        (0..8u8).filter(move |i| bits & (1 << i) != 0).map(AlternativeId)
    }

    /// Largest index + 1, or 0 for the empty set.
    pub fn span(self) -> usize {
        8 - self.0.leading_zeros() as usize
    }
}

impl FromIterator<AlternativeId> for AltSet {
    fn from_iter<I: IntoIterator<Item = AlternativeId>>(iter: I) -> Self {
        let mut s = AltSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Display for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// The relation classes that can be enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationClass {
    /// Complete preorder.
    WeakOrder,
    /// Asymmetric and transitive.
    StrictPartialOrder,
    /// Preorder with at least one incomparable pair.
    IncompletePreorder,
    /// Reflexive and transitive.
    Preorder,
    /// Strict partial order without incomparable pairs.
    LinearOrder,
}

impl RelationClass {
    pub const ALL: [RelationClass; 5] = [
        RelationClass::WeakOrder,
        RelationClass::StrictPartialOrder,
        RelationClass::IncompletePreorder,
        RelationClass::Preorder,
        RelationClass::LinearOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationClass::WeakOrder => "weak-order",
            RelationClass::StrictPartialOrder => "strict-partial-order",
            RelationClass::IncompletePreorder => "incomplete-preorder",
            RelationClass::Preorder => "preorder",
            RelationClass::LinearOrder => "linear-order",
        }
    }

    /// Membership test by direct definition.
    pub fn contains(self, r: &BinaryRelation) -> bool {
        let p = r.properties();
        match self {
            RelationClass::WeakOrder => p.reflexive && p.transitive && p.complete,
            RelationClass::Preorder => p.reflexive && p.transitive,
            RelationClass::IncompletePreorder => p.reflexive && p.transitive && !p.complete,
            RelationClass::StrictPartialOrder => p.asymmetric && p.transitive,
            RelationClass::LinearOrder => p.asymmetric && p.transitive && p.complete,
        }
    }
}

impl std::str::FromStr for RelationClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RelationClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown relation class {s:?}") })
    }
}

/// Properties of a relation, each computed from its definition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Properties {
    pub reflexive: bool,
    pub irreflexive: bool,
    pub transitive: bool,
    /// Every pair of distinct alternatives is ranked in at least one direction.
    pub complete: bool,
    pub asymmetric: bool,
    pub antisymmetric: bool,
    /// The asymmetric part has no cycle.
    pub acyclic: bool,
}

/// A binary relation on `0..n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    n: u8,
    rows: [u8; MAX_ALTERNATIVES],
}

/// The strict part, the symmetric part and the incomparability relation of a
/// reflexive relation. Together with the diagonal they partition all ordered
/// pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parts {
    pub strict: BinaryRelation,
    pub indifference: BinaryRelation,
    pub incomparability: BinaryRelation,
}

impl BinaryRelation {
    pub fn empty(n: usize) -> Result<Self> {
        check_universe(n)?;
        Ok(BinaryRelation { n: n as u8, rows: [0; MAX_ALTERNATIVES] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut r = Self::empty(n)?;
        for x in 0..n {
            r.rows[x] = 1 << x;
        }
        Ok(r)
    }

    /// Every ordered pair, including the diagonal.
    pub fn full(n: usize) -> Result<Self> {
        let mut r = Self::empty(n)?;
        let all = AltSet::full(n).bits();
        r.rows[..n].fill(all);
        Ok(r)
    }

    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Self::empty(n)?;
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::AlternativeOutOfRange { index: x.max(y), n });
            }
            r.rows[x] |= 1 << y;
        }
        Ok(r)
    }

    pub(crate) fn from_rows(n: usize, rows: [u8; MAX_ALTERNATIVES]) -> Self {
        BinaryRelation { n: n as u8, rows }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn holds(&self, x: usize, y: usize) -> bool {
        self.rows[x] & (1 << y) != 0
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x] |= 1 << y;
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        self.rows[x] &= !(1 << y);
    }

    /// `{y : x R y}`.
    pub fn row(&self, x: usize) -> AltSet {
        AltSet(self.rows[x])
    }

    /// `{y : y R x}`.
    pub fn column(&self, x: usize) -> AltSet {
        let bit = 1u8 << x;
        AltSet((0..self.n()).fold(0u8, |acc, y| if self.rows[y] & bit != 0 { acc | (1 << y) } else { acc }))
    }

    pub(crate) fn rows(&self) -> &[u8] {
        &self.rows[..self.n()]
    }

    pub fn universe(&self) -> AltSet {
        AltSet::full(self.n())
    }

    pub fn pair_count(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum()
    }

    /// All pairs `(x, y)` with `x R y` in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |x| (0..n).filter(move |&y| self.holds(x, y)).map(move |y| (x, y)))
    }

    pub fn transpose(&self) -> BinaryRelation {
        let mut t = *self;
        for x in 0..self.n() {
            t.rows[x] = self.column(x).bits();
        }
        t
    }

    pub fn union(&self, other: &BinaryRelation) -> BinaryRelation {
        let mut r = *self;
        for x in 0..self.n() {
            r.rows[x] |= other.rows[x];
        }
        r
    }

    pub fn intersection(&self, other: &BinaryRelation) -> BinaryRelation {
        let mut r = *self;
        for x in 0..self.n() {
            r.rows[x] &= other.rows[x];
        }
        r
    }

    pub fn is_subset(&self, other: &BinaryRelation) -> bool {
        self.n == other.n && (0..self.n()).all(|x| self.rows[x] & !other.rows[x] == 0)
    }

    /// `r ∪ {(x,x)}`.
    pub fn reflexive_closure(&self) -> BinaryRelation {
        let mut r = *self;
        for x in 0..self.n() {
            r.rows[x] |= 1 << x;
        }
        r
    }

    /// Key realising lexicographic order on the row-major matrix bits.
    pub fn canonical_key(&self) -> u64 {
        let n = self.n();
        let mut key = 0u64;
        for x in 0..n {
            for y in 0..n {
                key = (key << 1) | u64::from(self.holds(x, y));
            }
        }
        key
    }

    pub fn properties(&self) -> Properties {
        let n = self.n();
        let diag = (0..n).filter(|&x| self.holds(x, x)).count();
        let mut p = Properties {
            reflexive: diag == n,
            irreflexive: diag == 0,
            transitive: self.transitive_closure() == *self,
            complete: true,
            asymmetric: true,
            antisymmetric: true,
            acyclic: false,
        };
        for x in 0..n {
            if self.holds(x, x) {
                p.asymmetric = false;
            }
            for y in 0..n {
                if x == y {
                    continue;
                }
                let (xy, yx) = (self.holds(x, y), self.holds(y, x));
                if !xy && !yx {
                    p.complete = false;
                }
                if xy && yx {
                    p.asymmetric = false;
                    p.antisymmetric = false;
                }
            }
        }
        let strict = self.strict_part().transitive_closure();
        p.acyclic = (0..n).all(|x| !strict.holds(x, x));
        p
    }

    pub fn is_class(&self, class: RelationClass) -> bool {
        class.contains(self)
    }

    /// Smallest transitive superset (Warshall on bit rows).
    pub fn transitive_closure(&self) -> BinaryRelation {
        let n = self.n();
        let mut r = *self;
        for k in 0..n {
            let via = r.rows[k];
            let bit = 1u8 << k;
            for i in 0..n {
                if r.rows[i] & bit != 0 {
                    r.rows[i] |= via;
                }
            }
        }
        r
    }

    /// `{(x,y) : xRy ∧ ¬yRx}`.
    pub fn strict_part(&self) -> BinaryRelation {
        let t = self.transpose();
        let mut r = *self;
        for x in 0..self.n() {
            r.rows[x] &= !t.rows[x];
        }
        r
    }

    /// `{(x,y) : xRy ∧ yRx, x ≠ y}`.
    pub fn symmetric_part(&self) -> BinaryRelation {
        let t = self.transpose();
        let mut r = *self;
        for x in 0..self.n() {
            r.rows[x] &= t.rows[x] & !(1 << x);
        }
        r
    }

    /// `{(x,y) : ¬xRy ∧ ¬yRx, x ≠ y}`.
    pub fn incomparability(&self) -> BinaryRelation {
        let t = self.transpose();
        let all = AltSet::full(self.n()).bits();
        let mut r = *self;
        for x in 0..self.n() {
            r.rows[x] = all & !(self.rows[x] | t.rows[x]) & !(1 << x);
        }
        r
    }

    pub fn parts(&self) -> Result<Parts> {
        if !self.properties().reflexive {
            return Err(Error::NotAdmissible("reflexive"));
        }
        Ok(Parts {
            strict: self.strict_part(),
            indifference: self.symmetric_part(),
            incomparability: self.incomparability(),
        })
    }

    /// Eliaz–Ok regularity of a preorder: every incomparable pair `x, y` has a
    /// witness `z` that is incomparable to one of them and strictly ranked
    /// (in either direction) against the other.
    pub fn is_regular(&self) -> Result<bool> {
        if !RelationClass::Preorder.contains(self) {
            return Err(Error::NotAdmissible("preorder"));
        }
        let n = self.n();
        let strict = self.strict_part();
        let inc = self.incomparability();
        let ranked = |a: usize, b: usize| strict.holds(a, b) || strict.holds(b, a);
        for x in 0..n {
            for y in (x + 1)..n {
                if !inc.holds(x, y) {
                    continue;
                }
                let witnessed = (0..n).any(|z| {
                    (inc.holds(x, z) && ranked(y, z)) || (inc.holds(y, z) && ranked(x, z))
                });
                if !witnessed {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `{x ∈ menu : x R y for all y ∈ menu}`.
    pub fn greatest_elements(&self, menu: AltSet) -> Result<AltSet> {
        self.check_menu(menu)?;
        Ok(self.greatest_unchecked(menu))
    }

    /// `{x ∈ menu : no y ∈ menu with y R x}`.
    pub fn maximal_elements(&self, menu: AltSet) -> Result<AltSet> {
        self.check_menu(menu)?;
        Ok(self.maximal_unchecked(menu))
    }

    #[inline]
    pub(crate) fn greatest_unchecked(&self, menu: AltSet) -> AltSet {
        let m = menu.bits();
        let mut out = 0u8;
        let mut rest = m;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.rows[x] & m == m {
                out |= 1 << x;
            }
        }
        AltSet(out)
    }

    #[inline]
    pub(crate) fn maximal_unchecked(&self, menu: AltSet) -> AltSet {
        let m = menu.bits();
        let mut dominated = 0u8;
        let mut rest = m;
        while rest != 0 {
            let y = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            dominated |= self.rows[y];
        }
        AltSet(m & !dominated)
    }

    fn check_menu(&self, menu: AltSet) -> Result<()> {
        if menu.is_empty() {
            return Err(Error::EmptyMenu);
        }
        if menu.span() > self.n() {
            return Err(Error::AlternativeOutOfRange { index: menu.span() - 1, n: self.n() });
        }
        Ok(())
    }
}

fn check_universe(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ALTERNATIVES {
        return Err(Error::UniverseSize(n));
    }
    Ok(())
}

impl PartialOrd for BinaryRelation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BinaryRelation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.canonical_key().cmp(&other.canonical_key()))
    }
}

impl fmt::Debug for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .pairs()
            .map(|(x, y)| format!("{}{}", AlternativeId::from_index(x), AlternativeId::from_index(y)))
            .collect();
        write!(f, "BinaryRelation(n={}; {})", self.n, pairs.join(" "))
    }
}
