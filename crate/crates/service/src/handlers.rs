use std::collections::HashMap;

use axum::body::Bytes;
use axum::extract::multipart::MultipartError;
use axum::extract::{Multipart, Path, Query, State};
use axum::http::StatusCode;
use axum::Json;
use csa_core::engine::{compute_csa_with_distances, CsaConfig};
use csa_core::mesh::{parse_stl, prepare_mesh, DEFAULT_WELD_EPSILON_MM};
use csa_core::CsaReport;
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::session::{MeshSummary, Session, SessionStore};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreatedSession {
    pub session_id: String,
    pub organ: MeshSummary,
    pub tumor: MeshSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionInfo {
    pub session_id: String,
    pub created_at: u64,
    pub organ: MeshSummary,
    pub tumor: MeshSummary,
    pub last_result: Option<CsaReport>,
}

/// Body of `POST /sessions/{id}/compute`; absent fields take the defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComputeParams {
    pub cap_mm: Option<f64>,
    pub threshold_override_mm: Option<f64>,
    pub refine: Option<bool>,
}

impl ComputeParams {
    pub fn config(&self) -> CsaConfig {
        let d = CsaConfig::default();
        CsaConfig {
            cap_mm: self.cap_mm.unwrap_or(d.cap_mm),
            threshold_override_mm: self.threshold_override_mm,
            refine: self.refine.unwrap_or(d.refine),
        }
    }
}

/// Indexed triangles; triangle `k` is face `k` of the session mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshPayload {
    pub role: String,
    pub vertex_count: usize,
    pub face_count: usize,
    /// `x, y, z` per vertex, millimeters.
    pub positions: Vec<f64>,
    /// Three vertex indices per face.
    pub indices: Vec<u32>,
}

fn multipart_error(e: MultipartError) -> ApiError {
    ApiError::new(e.status(), e.body_text())
}

pub async fn create_session(
    State(store): State<SessionStore>,
    mut form: Multipart,
) -> Result<(StatusCode, Json<CreatedSession>), ApiError> {
    let mut files: HashMap<String, Bytes> = HashMap::new();
    let mut unit_scale = 1.0;
    let mut weld_eps = DEFAULT_WELD_EPSILON_MM;
    while let Some(field) = form.next_field().await.map_err(multipart_error)? {
        let name = field.name().unwrap_or_default().to_string();
        match name.as_str() {
            "organ" | "tumor" => {
                let bytes = field.bytes().await.map_err(multipart_error)?;
                files.insert(name, bytes);
            }
            "unit_scale" | "weld_epsilon_mm" => {
                let text = field.text().await.map_err(multipart_error)?;
                let v: f64 = text
                    .trim()
                    .parse()
                    .map_err(|_| ApiError::bad_request(format!("{name}: not a number: {text:?}")))?;
                if name == "unit_scale" {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(ApiError::bad_request(format!("unit_scale must be positive, got {v}")));
                    }
                    unit_scale = v;
                } else {
                    if !(v >= 0.0 && v.is_finite()) {
                        return Err(ApiError::bad_request(format!(
                            "weld_epsilon_mm must be non-negative, got {v}"
                        )));
                    }
                    weld_eps = v;
                }
            }
            _ => {}
        }
    }
    let take = |files: &mut HashMap<String, Bytes>, role: &str| {
        files
            .remove(role)
            .ok_or_else(|| ApiError::bad_request(format!("missing upload: {role}")))
    };
    let organ_bytes = take(&mut files, "organ")?;
    let tumor_bytes = take(&mut files, "tumor")?;

    let session = tokio::task::spawn_blocking(move || -> Result<Session, ApiError> {
        let load = |role: &str, bytes: &[u8]| {
            parse_stl(bytes)
                .map(|m| prepare_mesh(m, unit_scale, weld_eps))
                .map_err(|e| ApiError::bad_request(format!("{role}: {e}")))
        };
        let organ = load("organ", &organ_bytes)?;
        let tumor = load("tumor", &tumor_bytes)?;
        Ok(Session::new(organ, tumor))
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;

    let s = store.insert(session);
    tracing::info!(session = %s.id, organ_faces = s.organ_summary.face_count, tumor_faces = s.tumor_summary.face_count, "created");
    Ok((
        StatusCode::CREATED,
        Json(CreatedSession {
            session_id: s.id.to_string(),
            organ: s.organ_summary.clone(),
            tumor: s.tumor_summary.clone(),
        }),
    ))
}

pub async fn session_info(
    State(store): State<SessionStore>,
    Path(id): Path<String>,
) -> Result<Json<SessionInfo>, ApiError> {
    let s = store.get(&id).ok_or_else(|| ApiError::no_session(&id))?;
    let last_result = s.last_result.lock().await.clone();
    Ok(Json(SessionInfo {
        session_id: s.id.to_string(),
        created_at: s.created_at,
        organ: s.organ_summary.clone(),
        tumor: s.tumor_summary.clone(),
        last_result,
    }))
}

pub async fn delete_session(
    State(store): State<SessionStore>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    if store.remove(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::no_session(&id))
    }
}

#[derive(Debug, Deserialize)]
pub struct ComputeQuery {
    include_distribution: Option<String>,
}

pub async fn compute(
    State(store): State<SessionStore>,
    Path(id): Path<String>,
    Query(query): Query<ComputeQuery>,
    body: Bytes,
) -> Result<Json<CsaReport>, ApiError> {
    let s = store.get(&id).ok_or_else(|| ApiError::no_session(&id))?;
    let params: ComputeParams = if body.iter().all(|b| b.is_ascii_whitespace()) {
        ComputeParams::default()
    } else {
        serde_json::from_slice(&body).map_err(|e| ApiError::unprocessable(format!("request body: {e}")))?
    };
    let include = matches!(query.include_distribution.as_deref(), Some("1" | "true" | "yes"));
    let config = params.config();
    config.validate()?;

    let mut last = s.last_result.lock().await;
    let session = s.clone();
    let report = tokio::task::spawn_blocking(move || -> Result<CsaReport, ApiError> {
        let d = session.distances();
        let r = compute_csa_with_distances(&session.organ, &session.tumor, d, &config)?;
        let report = CsaReport::from_result(&r);
        Ok(if include {
            report.with_distribution(&r, d.as_slice(), config.cap_mm)
        } else {
            report
        })
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    *last = Some(report.clone());
    Ok(Json(report))
}

pub async fn mesh(
    State(store): State<SessionStore>,
    Path((id, role)): Path<(String, String)>,
) -> Result<Json<MeshPayload>, ApiError> {
    let s = store.get(&id).ok_or_else(|| ApiError::no_session(&id))?;
    let m = match role.as_str() {
        "organ" => &s.organ,
        "tumor" => &s.tumor,
        _ => {
            return Err(ApiError::new(
                StatusCode::NOT_FOUND,
                format!("unknown mesh {role:?}, expected organ or tumor"),
            ))
        }
    };
    Ok(Json(MeshPayload {
        role,
        vertex_count: m.vertex_count(),
        face_count: m.face_count(),
        positions: m.positions_flat(),
        indices: m.triangle_indices().into_iter().flatten().collect(),
    }))
}
