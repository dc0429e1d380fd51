use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{RefKind, TypeExpr};

use super::kont::Kont;
use super::value::{Location, Value};

pub type Env = BTreeMap<String, Location>;

/// Contents of a `borrow` cell entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BorrowFlag {
    /// ⊥: not borrowed.
    None,
    /// 0: borrowed immutably.
    Shared,
    /// 1: borrowed mutably.
    Exclusive,
}

impl BorrowFlag {
    pub fn symbol(self) -> &'static str {
        match self {
            BorrowFlag::None => "⊥",
            BorrowFlag::Shared => "0",
            BorrowFlag::Exclusive => "1",
        }
    }
}

/// One open block: the env to restore on exit and what it allocated.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScopeRecord {
    pub saved_env: Env,
    pub allocations: Vec<Location>,
    pub items: BTreeSet<String>,
}

/// An `fstack` entry.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub saved_env: Env,
    pub saved_scopes: Vec<ScopeRecord>,
    pub saved_kont: Vec<Kont>,
    pub return_type: TypeExpr,
    pub function: String,
}

/// The machine state. `k` holds the continuation with its head last.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Configuration {
    pub k: Vec<Kont>,
    pub env: Env,
    pub scopes: Vec<ScopeRecord>,
    pub genv: Env,
    pub fstack: Vec<Frame>,
    pub store: BTreeMap<Location, Value>,
    pub type_env: BTreeMap<Location, TypeExpr>,
    pub mut_type: BTreeMap<Location, bool>,
    pub next_loc: u64,
    pub borrow: BTreeMap<Location, BorrowFlag>,
    pub ref_cell: BTreeMap<Location, Location>,
    pub ref_type: BTreeMap<Location, Option<RefKind>>,
    pub moved: BTreeMap<Location, bool>,
    pub out: String,
    pub time: BTreeMap<String, u64>,
    pub time_enabled: bool,
}

impl Configuration {
    pub fn fresh() -> Self {
        Configuration::default()
    }

    /// Reserves one location with every per-location cell initialised.
    pub fn allocate(&mut self, ty: TypeExpr, mutable: bool) -> Location {
        let loc = Location(self.next_loc);
        self.next_loc += 1;
        self.init_location(loc, ty, mutable);
        loc
    }

    /// Reserves `n` consecutive element slots; the base carries the array
    /// type. A zero-length array still takes one slot so that its base is
    /// distinct from the next allocation.
    pub fn allocate_array(&mut self, elem: TypeExpr, n: u64, mutable: bool) -> Location {
        let base = Location(self.next_loc);
        self.next_loc += n.max(1);
        self.init_location(base, TypeExpr::Array(Box::new(elem), n), mutable);
        for i in 1..n {
            self.store.insert(Location(base.0 + i), Value::Undefined);
        }
        base
    }

    fn init_location(&mut self, loc: Location, ty: TypeExpr, mutable: bool) {
        self.store.insert(loc, Value::Undefined);
        self.type_env.insert(loc, ty);
        self.mut_type.insert(loc, mutable);
        self.borrow.insert(loc, BorrowFlag::None);
        self.ref_type.insert(loc, None);
        self.moved.insert(loc, false);
        if let Some(scope) = self.scopes.last_mut() {
            scope.allocations.push(loc);
        }
    }

    /// Name resolution: local environment first, then globals.
    pub fn resolve(&self, name: &str) -> Option<Location> {
        self.env.get(name).or_else(|| self.genv.get(name)).copied()
    }

    pub fn value_at(&self, loc: Location) -> &Value {
        self.store.get(&loc).unwrap_or(&Value::Undefined)
    }

    pub fn is_mutable(&self, loc: Location) -> bool {
        self.mut_type.get(&loc).copied().unwrap_or(false)
    }

    pub fn is_moved(&self, loc: Location) -> bool {
        self.moved.get(&loc).copied().unwrap_or(false)
    }

    pub fn borrow_flag(&self, loc: Location) -> BorrowFlag {
        self.borrow.get(&loc).copied().unwrap_or(BorrowFlag::None)
    }

    /// Binds `name` in the current environment, forgetting any field keys
    /// (`name.f`) left over from a previous struct binding.
    pub fn bind_local(&mut self, name: &str, loc: Location) {
        let prefix = format!("{name}.");
        self.env.retain(|k, _| !k.starts_with(&prefix));
        self.env.insert(name.to_string(), loc);
    }

    /// Sets the borrow flag of `target` from the references still alive.
    pub fn recompute_borrow(&mut self, target: Location) {
        let mut flag = BorrowFlag::None;
        for (r, t) in &self.ref_cell {
            if *t != target {
                continue;
            }
            match self.ref_type.get(r).copied().flatten() {
                Some(RefKind::Exclusive) => {
                    flag = BorrowFlag::Exclusive;
                    break;
                }
                Some(RefKind::Shared) => flag = BorrowFlag::Shared,
                None => {}
            }
        }
        if self.borrow.contains_key(&target) {
            self.borrow.insert(target, flag);
        }
    }

    /// Ends the life of the reference stored at `loc`, if it is one.
    pub fn kill_reference(&mut self, loc: Location) {
        if let Some(target) = self.ref_cell.remove(&loc) {
            self.ref_type.insert(loc, None);
            self.recompute_borrow(target);
        }
    }

    /// Locations holding function closures or struct descriptors.
    pub fn is_code(&self, loc: Location) -> bool {
        matches!(
            self.store.get(&loc),
            Some(Value::Closure(_)) | Some(Value::StructDesc(_))
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::IntTy;

    #[test]
    fn fresh_is_empty_and_deterministic() {
        let c = Configuration::fresh();
        assert_eq!(c.next_loc, 0);
        assert!(c.store.is_empty() && c.env.is_empty() && c.k.is_empty());
        assert_eq!(c, Configuration::fresh());
    }

    #[test]
    fn allocation_counts_from_zero() {
        let mut c = Configuration::fresh();
        let l = c.allocate(TypeExpr::Int(IntTy::I32), true);
        assert_eq!(l, Location(0));
        assert_eq!(c.next_loc, 1);
        assert_eq!(c.value_at(l), &Value::Undefined);
        assert!(c.is_mutable(l));
        assert_eq!(c.borrow_flag(l), BorrowFlag::None);
        assert_eq!(c.ref_type[&l], None);
        assert!(!c.is_moved(l));
    }

    #[test]
    fn consecutive_arrays_are_disjoint() {
        let mut c = Configuration::fresh();
        let a = c.allocate_array(TypeExpr::Int(IntTy::I32), 2, true);
        let b = c.allocate_array(TypeExpr::Int(IntTy::I32), 3, true);
        assert_eq!((a, b), (Location(0), Location(2)));
        assert_eq!(c.next_loc, 5);
        assert_eq!(c.type_env[&b], TypeExpr::Array(Box::new(TypeExpr::Int(IntTy::I32)), 3));
        for l in 2..5 {
            assert_eq!(c.value_at(Location(l)), &Value::Undefined);
        }
    }

    #[test]
    fn empty_array_keeps_base_unique() {
        let mut c = Configuration::fresh();
        let a = c.allocate_array(TypeExpr::Bool, 0, false);
        let b = c.allocate(TypeExpr::Bool, false);
        assert_ne!(a, b);
    }

    #[test]
    fn borrow_flag_follows_live_references() {
        let mut c = Configuration::fresh();
        let x = c.allocate(TypeExpr::Int(IntTy::I32), true);
        let p = c.allocate(TypeExpr::Ref(RefKind::Shared, Box::new(TypeExpr::Int(IntTy::I32))), false);
        let q = c.allocate(TypeExpr::Ref(RefKind::Shared, Box::new(TypeExpr::Int(IntTy::I32))), false);
        for r in [p, q] {
            c.ref_cell.insert(r, x);
            c.ref_type.insert(r, Some(RefKind::Shared));
        }
        c.recompute_borrow(x);
        assert_eq!(c.borrow_flag(x), BorrowFlag::Shared);
        c.kill_reference(p);
        assert_eq!(c.borrow_flag(x), BorrowFlag::Shared);
        c.kill_reference(q);
        assert_eq!(c.borrow_flag(x), BorrowFlag::None);
    }

    #[test]
    fn rebinding_drops_field_keys() {
        let mut c = Configuration::fresh();
        c.env.insert("p".into(), Location(1));
        c.env.insert("p.x".into(), Location(2));
        c.env.insert("pq".into(), Location(3));
        c.bind_local("p", Location(4));
        assert_eq!(c.env.len(), 2);
        assert_eq!(c.env["p"], Location(4));
    }
}
