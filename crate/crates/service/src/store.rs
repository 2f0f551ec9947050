//! In-memory session store with idle expiry.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use crate::session::{Session, SessionError};

/// Sessions keyed by random tokens. Each session has its own lock, so
/// requests for one session are serialized while different sessions proceed
/// independently.
#[derive(Debug)]
pub struct SessionStore {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    ttl: Duration,
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        SessionStore {
            sessions: Mutex::new(HashMap::new()),
            ttl,
        }
    }

    fn table(&self) -> MutexGuard<'_, HashMap<String, Arc<Mutex<Session>>>> {
        self.sessions.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn create(&self, source: &str, rules: &str) -> Result<Arc<Mutex<Session>>, SessionError> {
        self.sweep();
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Arc::new(Mutex::new(Session::create(id.clone(), source, rules)?));
        self.table().insert(id, session.clone());
        Ok(session)
    }

    /// Looks up a live session and marks it as used.
    pub fn get(&self, id: &str) -> Option<Arc<Mutex<Session>>> {
        self.sweep();
        let s = self.table().get(id).cloned()?;
        lock(&s).touched = Instant::now();
        Some(s)
    }

    pub fn len(&self) -> usize {
        self.table().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle for longer than the TTL. A session whose lock is
    /// held is in use and is kept.
    pub fn sweep(&self) {
        let now = Instant::now();
        self.table().retain(|_, s| match s.try_lock() {
            Ok(s) => now.duration_since(s.touched) <= self.ttl,
            Err(_) => true,
        });
    }
}

pub fn lock(s: &Mutex<Session>) -> MutexGuard<'_, Session> {
    s.lock().unwrap_or_else(|e| e.into_inner())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expiry() {
        let store = SessionStore::new(Duration::from_millis(30));
        let s = store.create("(run* (q) succeed)", "dfs").unwrap();
        let id = lock(&s).id.clone();
        assert!(store.get(&id).is_some());
        std::thread::sleep(Duration::from_millis(60));
        assert!(store.get(&id).is_none());
        assert!(store.is_empty());
    }

    #[test]
    fn tokens_are_distinct() {
        let store = SessionStore::new(Duration::from_secs(60));
        let a = lock(&store.create("(run* (q) succeed)", "dfs").unwrap()).id.clone();
        let b = lock(&store.create("(run* (q) succeed)", "dfs").unwrap()).id.clone();
        assert_ne!(a, b);
        assert_eq!(a.len(), 32);
    }
}
