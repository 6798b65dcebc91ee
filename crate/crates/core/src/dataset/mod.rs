//! Choice datasets: menus, possibly empty or multi-valued choices, and the
//! menu collections they are drawn from.

mod csv_io;

use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::relation::{AltSet, AlternativeId, MAX_ALTERNATIVES};

pub use csv_io::{parse_csv, parse_csv_path, write_csv};

/// A nonempty set of alternatives together with the order in which they were
/// listed. Equality and hashing look at the members only.
#[derive(Clone, Debug)]
pub struct Menu {
    members: AltSet,
    list_order: Vec<AlternativeId>,
    explicit_order: bool,
}

impl Menu {
    /// Menu listed in ascending index order.
    pub fn new(members: AltSet) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyMenu);
        }
        Ok(Menu { members, list_order: members.iter().collect(), explicit_order: false })
    }

    pub fn with_order(order: Vec<AlternativeId>) -> Result<Self> {
        let members: AltSet = order.iter().copied().collect();
        if members.is_empty() {
            return Err(Error::EmptyMenu);
        }
        if members.len() != order.len() {
            return Err(Error::Parse { line: 0, message: "list order repeats an alternative".into() });
        }
        Ok(Menu { members, list_order: order, explicit_order: true })
    }

    pub fn members(&self) -> AltSet {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn list_order(&self) -> &[AlternativeId] {
        &self.list_order
    }

    /// Whether the list order came from the data rather than the default.
    pub fn has_explicit_order(&self) -> bool {
        self.explicit_order
    }

    /// 1-based on-screen position of `x`.
    pub fn position(&self, x: AlternativeId) -> Option<usize> {
        self.list_order.iter().position(|&y| y == x).map(|p| p + 1)
    }

    pub fn first_listed(&self) -> AlternativeId {
        self.list_order[0]
    }

    /// Sort key: size, then the sorted member list.
    pub fn canonical_key(&self) -> (usize, Vec<AlternativeId>) {
        (self.members.len(), self.members.iter().collect())
    }
}

impl PartialEq for Menu {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Menu {}

impl Hash for Menu {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

/// One decision: a menu and the (possibly empty) subset chosen from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub menu: Menu,
    pub choice: AltSet,
}

impl Observation {
    pub fn new(menu: Menu, choice: AltSet) -> Result<Self> {
        if !choice.is_subset(menu.members()) {
            return Err(Error::Parse {
                line: 0,
                message: format!("choice {choice} is not a subset of menu {}", menu.members()),
            });
        }
        Ok(Observation { menu, choice })
    }

    pub fn is_deferral(&self) -> bool {
        self.choice.is_empty()
    }

    pub fn chose_everything(&self) -> bool {
        self.choice == self.menu.members()
    }
}

/// A subject's full record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub subject_id: String,
    pub forced: bool,
    n: usize,
    observations: Vec<Observation>,
}

impl Dataset {
    /// Validates the universe, menu distinctness and, for forced datasets,
    /// nonempty choices.
    pub fn new(subject_id: impl Into<String>, n: usize, forced: bool, observations: Vec<Observation>) -> Result<Self> {
        if n == 0 || n > MAX_ALTERNATIVES {
            return Err(Error::UniverseSize(n));
        }
        let mut seen = HashSet::new();
        for (i, obs) in observations.iter().enumerate() {
            if obs.menu.members().span() > n {
                return Err(Error::AlternativeOutOfRange { index: obs.menu.members().span() - 1, n });
            }
            if !seen.insert(obs.menu.members()) {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("menu {} appears more than once", obs.menu.members()),
                });
            }
            if forced && obs.is_deferral() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("deferral at menu {} in a forced-choice dataset", obs.menu.members()),
                });
            }
        }
        Ok(Dataset { subject_id: subject_id.into(), forced, n, observations })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn deferral_count(&self) -> usize {
        self.observations.iter().filter(|o| o.is_deferral()).count()
    }

    pub fn choose_everything_count(&self) -> usize {
        self.observations.iter().filter(|o| o.chose_everything()).count()
    }

    /// Always defers, or always chooses the whole menu.
    pub fn is_uninformative(&self) -> bool {
        !self.observations.is_empty()
            && (self.deferral_count() == self.len() || self.choose_everything_count() == self.len())
    }

    /// Union of all menus.
    pub fn alternatives(&self) -> AltSet {
        self.observations.iter().fold(AltSet::EMPTY, |acc, o| acc.union(o.menu.members()))
    }

    /// The same subject with `observations` replaced; used internally where
    /// invariants are preserved by construction.
    pub(crate) fn with_observations(&self, observations: Vec<Observation>, forced: bool) -> Dataset {
        Dataset { subject_id: self.subject_id.clone(), forced, n: self.n, observations }
    }

    /// Observation at `menu`, if present.
    pub fn observation_at(&self, menu: AltSet) -> Option<&Observation> {
        self.observations.iter().find(|o| o.menu.members() == menu)
    }
}

/// Observations with a nonempty choice, flagged as forced.
pub fn active_subdataset(d: &Dataset) -> Dataset {
    let active = d.observations.iter().filter(|o| !o.is_deferral()).cloned().collect();
    d.with_observations(active, true)
}

/// A set of pairwise distinct menus over `0..n`, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MenuCollection {
    n: usize,
    menus: Vec<Menu>,
}

impl MenuCollection {
    pub fn new(n: usize, menus: Vec<Menu>) -> Result<Self> {
        if n == 0 || n > MAX_ALTERNATIVES {
            return Err(Error::UniverseSize(n));
        }
        let mut seen = HashSet::new();
        for m in &menus {
            if m.members().span() > n {
                return Err(Error::AlternativeOutOfRange { index: m.members().span() - 1, n });
            }
            if !seen.insert(m.members()) {
                return Err(Error::Parse { line: 0, message: format!("duplicate menu {}", m.members()) });
            }
        }
        let mut menus = menus;
        menus.sort_by_key(Menu::canonical_key);
        Ok(MenuCollection { n, menus })
    }

    /// Menus of the given dataset.
    pub fn of_dataset(d: &Dataset) -> MenuCollection {
        let mut menus: Vec<Menu> = d.observations().iter().map(|o| o.menu.clone()).collect();
        menus.sort_by_key(Menu::canonical_key);
        MenuCollection { n: d.n(), menus }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn menus(&self) -> &[Menu] {
        &self.menus
    }

    pub fn len(&self) -> usize {
        self.menus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.menus.is_empty()
    }
}

/// All subsets of `0..n` whose size lies in `sizes`.
pub fn generate_menu_collection(n: usize, sizes: &[usize]) -> Result<MenuCollection> {
    if n == 0 || n > MAX_ALTERNATIVES {
        return Err(Error::UniverseSize(n));
    }
    if let Some(&size) = sizes.iter().find(|&&s| s == 0 || s > n) {
        return Err(Error::MenuSize { size, n });
    }
    let menus = (1u16..(1 << n))
        .map(|bits| AltSet::from_bits(bits as u8))
        .filter(|s| sizes.contains(&s.len()))
        .map(|s| Menu::new(s).expect("nonempty"))
        .collect();
    MenuCollection::new(n, menus)
}

/// Symmetry of a menu collection with respect to its alternatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    /// Every alternative appears in menus with the same multiset of sizes.
    Strong,
    /// Every alternative appears equally often, but size profiles differ.
    WeakOnly,
    Asymmetric,
}

pub fn check_symmetry(collection: &MenuCollection) -> Symmetry {
    let n = collection.n();
    let max_size = collection.menus().iter().map(Menu::len).max().unwrap_or(0);
    let profiles: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let x = AlternativeId::from_index(x);
            let mut counts = vec![0usize; max_size + 1];
            for m in collection.menus().iter().filter(|m| m.members().contains(x)) {
                counts[m.len()] += 1;
            }
            counts
        })
        .collect();
    if profiles.windows(2).all(|w| w[0] == w[1]) {
        return Symmetry::Strong;
    }
    let totals: Vec<usize> = profiles.iter().map(|p| p.iter().sum()).collect();
    if totals.windows(2).all(|w| w[0] == w[1]) {
        Symmetry::WeakOnly
    } else {
        Symmetry::Asymmetric
    }
}
