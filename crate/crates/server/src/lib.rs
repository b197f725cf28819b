//! Local JSON service for interactive decision-graph cutting.
//!
//! One [`Session`] per process: the in-tree is built at startup and never
//! changes; the only mutable value is the current cut set, which a POST
//! replaces as a whole.
//!
//! | route                  | body                                              |
//! |------------------------|---------------------------------------------------|
//! | `GET /api/state`       | `{points, potential, parent, edge_length}`        |
//! | `GET /api/decision-graph` | `[{node, p, w}]`, non-root nodes by index      |
//! | `POST /api/cuts`       | `{cut_nodes}` in, `{k, cluster_id, roots}` out    |
//!
//! Anything else is looked up in the static asset directory, if one is set.

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use itclust::cutting::{decision_graph, dg_manual_cut, CutError, DecisionEntry};
use itclust::intree::{build_it, ClusterAssignment};
use itclust::{InTree, Point2};
use serde::{Deserialize, Serialize};
use std::net::{Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::{Arc, RwLock};
use tower_http::services::ServeDir;

pub struct Session {
    points: Vec<Point2>,
    it: InTree,
    /// Response for the current cut set, swapped whole on every POST.
    current: RwLock<CutsResponse>,
}

impl Session {
    /// `it` must be fresh (no cut flags).
    pub fn new(points: Vec<Point2>, it: InTree) -> Self {
        assert_eq!(points.len(), it.len(), "points and in-tree differ in length");
        let current = RwLock::new(CutsResponse::from(
            dg_manual_cut(&it, &[]).expect("fresh in-tree").assignment,
        ));
        Session {
            points,
            it,
            current,
        }
    }

    /// Builds the in-tree from the given potentials.
    pub fn from_potential(points: Vec<Point2>, potential: &[f64]) -> Self {
        let it = build_it(&points, potential);
        Session::new(points, it)
    }

    pub fn in_tree(&self) -> &InTree {
        &self.it
    }

    /// Clusters for the most recently accepted cut set.
    pub fn current(&self) -> CutsResponse {
        self.current.read().expect("lock poisoned").clone()
    }

    pub fn state(&self) -> StateResponse {
        StateResponse {
            points: self.points.iter().map(|p| [p.x, p.y]).collect(),
            potential: self.it.potential.clone(),
            parent: self.it.parent.clone(),
            edge_length: self.it.edge_length.clone(),
        }
    }

    pub fn decision_graph(&self) -> Vec<DecisionEntry> {
        decision_graph(&self.it).entries
    }

    /// Replaces the cut set. On error the previous cut set stays in force.
    pub fn set_cuts(&self, cut_nodes: &[usize]) -> Result<CutsResponse, CutError> {
        let resp = CutsResponse::from(dg_manual_cut(&self.it, cut_nodes)?.assignment);
        *self.current.write().expect("lock poisoned") = resp.clone();
        Ok(resp)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateResponse {
    pub points: Vec<[f64; 2]>,
    pub potential: Vec<f64>,
    pub parent: Vec<usize>,
    pub edge_length: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutsRequest {
    pub cut_nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutsResponse {
    pub k: usize,
    pub cluster_id: Vec<usize>,
    pub roots: Vec<usize>,
}

impl From<ClusterAssignment> for CutsResponse {
    fn from(a: ClusterAssignment) -> Self {
        CutsResponse {
            k: a.k,
            cluster_id: a.cluster_id,
            roots: a.roots,
        }
    }
}

/// Body of a 422 reply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutRejected {
    pub error: String,
    pub node: Option<usize>,
}

struct Rejected(CutError);

impl IntoResponse for Rejected {
    fn into_response(self) -> Response {
        let node = match self.0 {
            CutError::InvalidCutNode { node, .. } => Some(node),
            _ => None,
        };
        let body = CutRejected {
            error: self.0.to_string(),
            node,
        };
        (StatusCode::UNPROCESSABLE_ENTITY, Json(body)).into_response()
    }
}

async fn get_state(State(s): State<Arc<Session>>) -> Json<StateResponse> {
    Json(s.state())
}

async fn get_decision_graph(State(s): State<Arc<Session>>) -> Json<Vec<DecisionEntry>> {
    Json(s.decision_graph())
}

async fn post_cuts(
    State(s): State<Arc<Session>>,
    Json(req): Json<CutsRequest>,
) -> Result<Json<CutsResponse>, Rejected> {
    s.set_cuts(&req.cut_nodes).map(Json).map_err(Rejected)
}

pub fn router(session: Arc<Session>, assets: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/state", get(get_state))
        .route("/api/decision-graph", get(get_decision_graph))
        .route("/api/cuts", post(post_cuts))
        .with_state(session);
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Serves on 127.0.0.1:`port` until the process is stopped.
pub async fn serve(
    session: Arc<Session>,
    port: u16,
    assets: Option<PathBuf>,
) -> std::io::Result<()> {
    let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(session, assets)).await
}

/// [`serve`] on a fresh multi-threaded runtime, for callers without one.
pub fn serve_blocking(
    session: Arc<Session>,
    port: u16,
    assets: Option<PathBuf>,
) -> std::io::Result<()> {
    tokio::runtime::Runtime::new()?.block_on(serve(session, port, assets))
}
