//! Persistent, extension-only sequence used for substitutions and trails.
//!
//! Appending shares the whole existing list, so states that descend from a
//! common ancestor (and every snapshot kept in a history) share storage.

use std::fmt;
use std::sync::Arc;

struct Node<T> {
    item: T,
    prev: Option<Arc<Node<T>>>,
}

pub struct PList<T> {
    last: Option<Arc<Node<T>>>,
    len: usize,
}

impl<T> PList<T> {
    pub fn new() -> Self {
        PList { last: None, len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns a new list with `item` appended; `self` is untouched.
    pub fn push(&self, item: T) -> Self {
        PList {
            last: Some(Arc::new(Node {
                item,
                prev: self.last.clone(),
            })),
            len: self.len + 1,
        }
    }

    /// Iterates newest first.
    pub fn iter_rev(&self) -> RevIter<'_, T> {
        RevIter {
            cur: self.last.as_deref(),
        }
    }

    /// Items in insertion order.
    pub fn to_vec(&self) -> Vec<&T> {
        let mut out: Vec<&T> = self.iter_rev().collect();
        out.reverse();
        out
    }

    /// True if `other` is a prefix of `self` (pointer-identity fast path,
    /// falling back to element comparison).
    pub fn extends(&self, other: &PList<T>) -> bool
    where
        T: PartialEq,
    {
        if other.len > self.len {
            return false;
        }
        let mut cur = self.last.as_ref();
        for _ in 0..(self.len - other.len) {
            cur = cur.and_then(|n| n.prev.as_ref());
        }
        match (cur, other.last.as_ref()) {
            (None, None) => true,
            (Some(a), Some(b)) if Arc::ptr_eq(a, b) => true,
            _ => {
                let mine = PList {
                    last: cur.cloned(),
                    len: other.len,
                };
                mine == *other
            }
        }
    }
}

impl<T> Default for PList<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for PList<T> {
    fn clone(&self) -> Self {
        PList {
            last: self.last.clone(),
            len: self.len,
        }
    }
}

impl<T: PartialEq> PartialEq for PList<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.len != other.len {
            return false;
        }
        let mut a = self.last.as_ref();
        let mut b = other.last.as_ref();
        loop {
            match (a, b) {
                (None, None) => return true,
                (Some(x), Some(y)) => {
                    if Arc::ptr_eq(x, y) {
                        return true;
                    }
                    if x.item != y.item {
                        return false;
                    }
                    a = x.prev.as_ref();
                    b = y.prev.as_ref();
                }
                _ => return false,
            }
        }
    }
}

impl<T: Eq> Eq for PList<T> {}

impl<T: fmt::Debug> fmt::Debug for PList<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_vec()).finish()
    }
}

impl<T> Drop for PList<T> {
    // Unlink iteratively so long lists don't overflow the stack.
    fn drop(&mut self) {
        let mut cur = self.last.take();
        while let Some(node) = cur {
            match Arc::try_unwrap(node) {
                Ok(mut n) => cur = n.prev.take(),
                Err(_) => break,
            }
        }
    }
}

pub struct RevIter<'a, T> {
    cur: Option<&'a Node<T>>,
}

impl<'a, T> Iterator for RevIter<'a, T> {
    type Item = &'a T;

    fn next(&mut self) -> Option<&'a T> {
        let node = self.cur?;
        self.cur = node.prev.as_deref();
        Some(&node.item)
    }
}

impl<T> FromIterator<T> for PList<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        iter.into_iter().fold(PList::new(), |l, x| l.push(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_shares_prefix() {
        let a: PList<u32> = [1, 2].into_iter().collect();
        let b = a.push(3);
        assert_eq!(a.len(), 2);
        assert_eq!(b.to_vec(), vec![&1, &2, &3]);
        assert!(b.extends(&a));
        assert!(!a.extends(&b));
        let c: PList<u32> = [1, 2, 3].into_iter().collect();
        assert_eq!(b, c);
        assert!(c.extends(&a));
        let d: PList<u32> = [1, 5].into_iter().collect();
        assert!(!b.extends(&d));
    }
}
