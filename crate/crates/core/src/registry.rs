//! Name-keyed registries of interchangeable strategies.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Anything that can be looked up by name in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str {
        ""
    }
}

/// Strategies of one kind, keyed by name, with one marked as the default.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    default: &'static str,
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str, default: Box<T>) -> Self {
        let mut reg = Registry {
            kind,
            default: default.name(),
            entries: BTreeMap::new(),
        };
        reg.register(default);
        reg
    }

    /// Add a strategy, replacing any previous one with the same name.
    pub fn register(&mut self, strategy: Box<T>) -> &mut Self {
        self.entries.insert(strategy.name(), strategy);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries.get(name).map(Box::as_ref).ok_or_else(|| {
            Error::Configuration(format!(
                "unknown {} {name:?}; available: {}",
                self.kind,
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    /// Look up `name`, falling back to the default when `None`.
    pub fn resolve(&self, name: Option<&str>) -> Result<&T> {
        self.get(name.unwrap_or(self.default))
    }

    pub fn default_strategy(&self) -> &T {
        self.entries[self.default].as_ref()
    }

    pub fn default_name(&self) -> &'static str {
        self.default
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.values().map(Box::as_ref)
    }
}

impl<T: ?Sized + Named> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("default", &self.default)
            .field("entries", &self.names().collect::<Vec<_>>())
            .finish()
    }
}
