use std::fmt;

/// Named quantifier bounds used by a computation, reported alongside results.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bounds(Vec<(&'static str, u64)>);

impl Bounds {
    pub fn new() -> Self {
        Bounds(Vec::new())
    }

    pub fn with(mut self, name: &'static str, value: impl TryInto<u64>) -> Self {
        self.0.push((name, value.try_into().unwrap_or(u64::MAX)));
        self
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        self.0.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }

    pub fn entries(&self) -> &[(&'static str, u64)] {
        &self.0
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(n, v)| format!("{n}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Why a search space is certified empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    /// Ordered-union interval argument: every opening `a(1)` would need
    /// `max ⋃L < min a(1) <= max a(1) < min f(t(1))`, and that interval
    /// is empty for every `t(1) <= r`. Holds for any ordered ground set
    /// containing the instance's points.
    OrderedInterval { radius: usize },
    /// Exhaustive scan over the truncated universe: no `a(1) ∈ σ(L)` and
    /// `t(1) <= r` make every `a(1)*f(t(1))` defined and inside `σ(L)`.
    OpeningScan { radius: usize, universe: usize },
}

impl Proof {
    pub fn id(&self) -> &'static str {
        match self {
            Proof::OrderedInterval { .. } => "ordered-interval",
            Proof::OpeningScan { .. } => "opening-scan",
        }
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proof::OrderedInterval { radius } => write!(f, "ordered-interval(r={radius})"),
            Proof::OpeningScan { radius, universe } => {
                write!(f, "opening-scan(r={radius},universe={universe})")
            }
        }
    }
}

/// Tri-state search result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// No solution exists for any value of the unbounded parameters.
    ProvenEmpty(Proof),
    /// Nothing found within the listed bounds.
    BoundExhausted(Bounds),
}

impl<T> SearchOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn is_proven_empty(&self) -> bool {
        matches!(self, SearchOutcome::ProvenEmpty(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Found(t) => SearchOutcome::Found(f(t)),
            SearchOutcome::ProvenEmpty(p) => SearchOutcome::ProvenEmpty(p),
            SearchOutcome::BoundExhausted(b) => SearchOutcome::BoundExhausted(b),
        }
    }

    /// `Found`, `ProvenEmpty` or `BoundExhausted`.
    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found(_) => "Found",
            SearchOutcome::ProvenEmpty(_) => "ProvenEmpty",
            SearchOutcome::BoundExhausted(_) => "BoundExhausted",
        }
    }
}
