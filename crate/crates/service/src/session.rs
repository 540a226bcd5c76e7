use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use csa_core::engine::{pair_distances, DistanceVector};
use csa_core::mesh::{mesh_total_area, mesh_volume, WeldReport};
use csa_core::{CsaReport, TriMesh};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshSummary {
    pub face_count: usize,
    pub vertex_count: usize,
    pub total_area: f64,
    /// `null` when the mesh is not watertight.
    pub volume: Option<f64>,
    pub bbox: BoundingBox,
    pub merged_vertices: usize,
    pub dropped_faces: usize,
}

impl MeshSummary {
    pub fn of(weld: &WeldReport) -> Self {
        let m = &weld.mesh;
        let (lo, hi) = m.bounding_box();
        MeshSummary {
            face_count: m.face_count(),
            vertex_count: m.vertex_count(),
            total_area: mesh_total_area(m),
            volume: mesh_volume(m).ok(),
            bbox: BoundingBox {
                min: lo.to_array(),
                max: hi.to_array(),
            },
            merged_vertices: weld.merged_vertices,
            dropped_faces: weld.dropped_faces,
        }
    }
}

/// An uploaded pair. The meshes never change; only the last result does.
#[derive(Debug)]
pub struct Session {
    pub id: Uuid,
    pub organ: TriMesh,
    pub tumor: TriMesh,
    pub organ_summary: MeshSummary,
    pub tumor_summary: MeshSummary,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
    distances: OnceLock<DistanceVector>,
    /// Held for the whole compute, so computes on one session run one at a time.
    pub(crate) last_result: tokio::sync::Mutex<Option<CsaReport>>,
    last_access: Mutex<Instant>,
}

impl Session {
    pub fn new(organ: WeldReport, tumor: WeldReport) -> Self {
        Session {
            id: Uuid::new_v4(),
            organ_summary: MeshSummary::of(&organ),
            tumor_summary: MeshSummary::of(&tumor),
            organ: organ.mesh,
            tumor: tumor.mesh,
            created_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            distances: OnceLock::new(),
            last_result: tokio::sync::Mutex::new(None),
            last_access: Mutex::new(Instant::now()),
        }
    }

    /// Centroid distances, computed on first use. They depend only on the
    /// meshes, so every later compute reuses them.
    pub fn distances(&self) -> &DistanceVector {
        self.distances
            .get_or_init(|| pair_distances(&self.organ, &self.tumor))
    }

    pub fn distances_cached(&self) -> bool {
        self.distances.get().is_some()
    }

    fn touch(&self) {
        *self.last_access.lock().unwrap() = Instant::now();
    }

    fn idle_for(&self) -> Duration {
        self.last_access.lock().unwrap().elapsed()
    }
}

#[derive(Debug, Clone, Default)]
pub struct SessionStore {
    inner: Arc<RwLock<HashMap<Uuid, Arc<Session>>>>,
}

impl SessionStore {
    pub fn insert(&self, s: Session) -> Arc<Session> {
        let s = Arc::new(s);
        self.inner.write().unwrap().insert(s.id, s.clone());
        s
    }

    /// Looks up a session by its textual ID and marks it as used.
    pub fn get(&self, id: &str) -> Option<Arc<Session>> {
        let id = Uuid::parse_str(id).ok()?;
        let s = self.inner.read().unwrap().get(&id).cloned()?;
        s.touch();
        Some(s)
    }

    pub fn remove(&self, id: &str) -> bool {
        Uuid::parse_str(id)
            .ok()
            .and_then(|id| self.inner.write().unwrap().remove(&id))
            .is_some()
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle for longer than `ttl`; returns how many.
    pub fn evict_idle(&self, ttl: Duration) -> usize {
        let mut map = self.inner.write().unwrap();
        let before = map.len();
        map.retain(|_, s| s.idle_for() <= ttl);
        before - map.len()
    }
}
