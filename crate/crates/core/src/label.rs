use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// An interned vertex or edge label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl Label {
    /// Label carried by every edge when edge labels are disabled.
    pub const UNLABELED: Label = Label(u32::MAX);
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Label::UNLABELED {
            f.write_str("_")
        } else {
            write!(f, "#{}", self.0)
        }
    }
}

/// Bijective string <-> [`Label`] mapping. Ids are handed out densely in
/// first-seen order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelInterner {
    ids: BTreeMap<String, Label>,
    names: Vec<String>,
}

impl LabelInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Label {
        if let Some(&label) = self.ids.get(name) {
            return label;
        }
        let label = Label(self.names.len() as u32);
        self.ids.insert(name.to_string(), label);
        self.names.push(name.to_string());
        label
    }

    pub fn get(&self, name: &str) -> Option<Label> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, label: Label) -> Option<&str> {
        self.names.get(label.0 as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Vertex and edge labels live in separate namespaces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels {
    pub vertex: LabelInterner,
    pub edge: LabelInterner,
}

impl Labels {
    pub fn new() -> Self {
        Self::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_bijective() {
        let mut interner = LabelInterner::new();
        let a = interner.intern("A");
        let b = interner.intern("B");
        assert_ne!(a, b);
        assert_eq!(interner.intern("A"), a);
        assert_eq!(interner.name(b), Some("B"));
        assert_eq!(interner.get("C"), None);
        assert_eq!(interner.len(), 2);
    }
}
