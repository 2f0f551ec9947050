//! Two-stack history with a focus.

/// `back` holds older items (top = most recent), `forward` holds newer items
/// already visited (top = next). Every operation is O(1).
#[derive(Clone, Debug)]
pub struct HistoryZipper<T> {
    back: Vec<T>,
    focus: T,
    forward: Vec<T>,
}

impl<T> HistoryZipper<T> {
    pub fn new(focus: T) -> Self {
        HistoryZipper {
            back: Vec::new(),
            focus,
            forward: Vec::new(),
        }
    }

    pub fn focus(&self) -> &T {
        &self.focus
    }

    /// Moves to the next visited item, if any.
    pub fn redo(&mut self) -> bool {
        match self.forward.pop() {
            Some(next) => {
                let old = std::mem::replace(&mut self.focus, next);
                self.back.push(old);
                true
            }
            None => false,
        }
    }

    /// Makes `next` the focus. Only valid when there is nothing to redo,
    /// which keeps visited history intact.
    pub fn push(&mut self, next: T) {
        debug_assert!(self.forward.is_empty(), "push would discard redo history");
        let old = std::mem::replace(&mut self.focus, next);
        self.back.push(old);
    }

    pub fn undo(&mut self) -> bool {
        match self.back.pop() {
            Some(prev) => {
                let old = std::mem::replace(&mut self.focus, prev);
                self.forward.push(old);
                true
            }
            None => false,
        }
    }

    pub fn can_redo(&self) -> bool {
        !self.forward.is_empty()
    }

    /// Number of items, including the focus.
    pub fn len(&self) -> usize {
        self.back.len() + 1 + self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undo_redo() {
        let mut z = HistoryZipper::new(0);
        z.push(1);
        z.push(2);
        assert!(z.undo() && z.undo());
        assert!(!z.undo());
        assert_eq!(*z.focus(), 0);
        assert!(z.redo());
        assert_eq!(*z.focus(), 1);
        assert!(z.can_redo());
        assert!(z.redo() && !z.redo());
        assert_eq!((*z.focus(), z.len()), (2, 3));
    }
}
