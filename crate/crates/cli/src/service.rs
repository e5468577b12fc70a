//! Read-only HTTP service over an immutable snapshot of all three levels.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use cartograph_core::map::{layered_layout, map_factors, map_node, Layout};
use cartograph_core::navigation::Move;
use cartograph_core::{Analysis, AnnotationCorpus, Convention, Error, Level};
use serde::Serialize;

use crate::error::{CliError, CliResult};

const INDEX_HTML: &str = "<!doctype html>
<html><head><meta charset=\"utf-8\"><title>cartograph</title></head>
<body><p>The map data is served under <code>/api</code>. Start the service with <code>--assets</code> to serve the navigator UI here.</p></body></html>
";

struct LevelView {
    analysis: Analysis,
    layout: Layout,
    map_json: String,
}

struct Asset {
    content_type: &'static str,
    body: Vec<u8>,
}

/// Everything the service answers from; built once at startup.
pub struct Snapshot {
    default_level: Level,
    levels: Vec<LevelView>,
    assets: HashMap<String, Asset>,
}

impl Snapshot {
    pub fn new(
        corpus: &AnnotationCorpus,
        conventions: &[Convention],
        default_level: Level,
        max_factors: Option<usize>,
    ) -> CliResult<Snapshot> {
        let mut levels = Vec::new();
        for level in Level::ALL {
            let analysis = Analysis::new(corpus, conventions, level)?;
            let map_json = analysis.map(max_factors).to_json()?;
            let layout = layered_layout(analysis.lattice());
            levels.push(LevelView {
                analysis,
                layout,
                map_json,
            });
        }
        let mut assets = HashMap::new();
        assets.insert(
            "/index.html".to_string(),
            Asset {
                content_type: "text/html; charset=utf-8",
                body: INDEX_HTML.as_bytes().to_vec(),
            },
        );
        Ok(Snapshot {
            default_level,
            levels,
            assets,
        })
    }

    /// Loads every file below `dir` into memory, keyed by its URL path.
    pub fn with_assets(mut self, dir: &Path) -> CliResult<Snapshot> {
        let mut stack = vec![dir.to_path_buf()];
        while let Some(current) = stack.pop() {
            let io = |source| CliError::Io {
                path: current.clone(),
                source,
            };
            for entry in std::fs::read_dir(&current).map_err(io)? {
                let path = entry.map_err(io)?.path();
                if path.is_dir() {
                    stack.push(path);
                    continue;
                }
                let body = std::fs::read(&path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                let rel = path.strip_prefix(dir).unwrap_or(&path);
                let key = format!(
                    "/{}",
                    rel.components()
                        .map(|c| c.as_os_str().to_string_lossy())
                        .collect::<Vec<_>>()
                        .join("/")
                );
                let content_type = content_type(&path);
                self.assets.insert(key, Asset { content_type, body });
            }
        }
        Ok(self)
    }

    fn view(&self, params: &HashMap<String, String>) -> Result<&LevelView, ApiError> {
        let level = match params.get("level") {
            Some(raw) => raw
                .parse::<Level>()
                .map_err(|_| ApiError::bad_request(format!("level must be 1, 2 or 3, got `{raw}`")))?,
            None => self.default_level,
        };
        Ok(&self.levels[usize::from(level.index()) - 1])
    }
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()).unwrap_or("") {
        "html" => "text/html; charset=utf-8",
        "js" | "mjs" => "text/javascript",
        "css" => "text/css",
        "json" => "application/json",
        "svg" => "image/svg+xml",
        "png" => "image/png",
        "ico" => "image/x-icon",
        _ => "application/octet-stream",
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }

    fn not_found(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            message: message.into(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownConcept(_) | Error::UnknownArticle(_) => ApiError::not_found(e.to_string()),
            other => ApiError::bad_request(other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(serde_json::json!({ "error": self.message })),
        )
            .into_response()
    }
}

type Params = Query<HashMap<String, String>>;
type Shared = State<Arc<Snapshot>>;

fn parse_id(raw: &str, what: &str) -> Result<usize, ApiError> {
    raw.parse()
        .map_err(|_| ApiError::bad_request(format!("{what} must be a non-negative integer, got `{raw}`")))
}

fn required<'a>(params: &'a HashMap<String, String>, key: &str) -> Result<&'a str, ApiError> {
    params
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| ApiError::bad_request(format!("missing query parameter `{key}`")))
}

fn concept_id(view: &LevelView, raw: &str) -> Result<usize, ApiError> {
    let id = parse_id(raw, "concept id")?;
    view.analysis.lattice().concept(id)?;
    Ok(id)
}

async fn map(State(s): Shared, Query(p): Params) -> Result<Response, ApiError> {
    let view = s.view(&p)?;
    Ok((
        [(header::CONTENT_TYPE, "application/json")],
        view.map_json.clone(),
    )
        .into_response())
}

async fn concept(
    State(s): Shared,
    UrlPath(id): UrlPath<String>,
    Query(p): Params,
) -> Result<Response, ApiError> {
    let view = s.view(&p)?;
    let id = concept_id(view, &id)?;
    Ok(Json(map_node(view.analysis.lattice(), &view.layout, id)).into_response())
}

async fn navigate(
    State(s): Shared,
    UrlPath(id): UrlPath<String>,
    Query(p): Params,
) -> Result<Response, ApiError> {
    let view = s.view(&p)?;
    let id = concept_id(view, &id)?;
    let kind: Move = required(&p, "move")?
        .parse()
        .map_err(|_| ApiError::bad_request("move must be specialize, generalize, contrast or complement"))?;
    Ok(Json(view.analysis.annotated.navigate(id, kind)?).into_response())
}

fn pair(view: &LevelView, p: &HashMap<String, String>) -> Result<(usize, usize), ApiError> {
    let a = parse_id(required(p, "a")?, "a")?;
    let b = parse_id(required(p, "b")?, "b")?;
    let lattice = view.analysis.lattice();
    lattice.concept(a)?;
    lattice.concept(b)?;
    Ok((a, b))
}

async fn meet(State(s): Shared, Query(p): Params) -> Result<Response, ApiError> {
    let view = s.view(&p)?;
    let (a, b) = pair(view, &p)?;
    let id = view.analysis.lattice().meet(a, b)?;
    Ok(Json(map_node(view.analysis.lattice(), &view.layout, id)).into_response())
}

async fn join(State(s): Shared, Query(p): Params) -> Result<Response, ApiError> {
    let view = s.view(&p)?;
    let (a, b) = pair(view, &p)?;
    let id = view.analysis.lattice().join(a, b)?;
    Ok(Json(map_node(view.analysis.lattice(), &view.layout, id)).into_response())
}

async fn compromise(State(s): Shared, Query(p): Params) -> Result<Response, ApiError> {
    let view = s.view(&p)?;
    let (a, b) = pair(view, &p)?;
    Ok(Json(view.analysis.annotated.compromise(a, b)?).into_response())
}

async fn commonality(State(s): Shared, Query(p): Params) -> Result<Response, ApiError> {
    let view = s.view(&p)?;
    let (a, b) = pair(view, &p)?;
    Ok(Json(view.analysis.annotated.commonality(a, b)?).into_response())
}

#[derive(Serialize)]
struct ArticleBody<'a> {
    id: &'a str,
    title: &'a str,
    source: Option<&'a str>,
    concept: usize,
}

async fn article(
    State(s): Shared,
    UrlPath(id): UrlPath<String>,
    Query(p): Params,
) -> Result<Response, ApiError> {
    let view = s.view(&p)?;
    let annotated = &view.analysis.annotated;
    let (_, meta) = annotated.article(&id)?;
    Ok(Json(ArticleBody {
        id: &meta.id,
        title: &meta.title,
        source: meta.source.as_deref(),
        concept: annotated.locate_article(&id)?,
    })
    .into_response())
}

async fn factors(State(s): Shared, Query(p): Params) -> Result<Response, ApiError> {
    let view = s.view(&p)?;
    let limit = match p.get("limit") {
        Some(raw) => Some(parse_id(raw, "limit")?),
        None => None,
    };
    Ok(Json(map_factors(&view.analysis.factorization, limit)).into_response())
}

async fn metrics(State(s): Shared, Query(p): Params) -> Result<Response, ApiError> {
    let view = s.view(&p)?;
    Ok(Json(&view.analysis.metrics).into_response())
}

async fn asset(State(s): Shared, uri: Uri) -> Response {
    let path = match uri.path() {
        "/" => "/index.html",
        other => other,
    };
    match s.assets.get(path) {
        Some(a) => ([(header::CONTENT_TYPE, a.content_type)], a.body.clone()).into_response(),
        None => ApiError::not_found(format!("no resource at `{}`", uri.path())).into_response(),
    }
}

pub fn router(snapshot: Arc<Snapshot>) -> Router {
    Router::new()
        .route("/api/map", get(map))
        .route("/api/concepts/{id}", get(concept))
        .route("/api/navigate/{id}", get(navigate))
        .route("/api/meet", get(meet))
        .route("/api/join", get(join))
        .route("/api/compromise", get(compromise))
        .route("/api/commonality", get(commonality))
        .route("/api/articles/{id}", get(article))
        .route("/api/factors", get(factors))
        .route("/api/metrics", get(metrics))
        .fallback(get(asset))
        .with_state(snapshot)
}

pub async fn serve(snapshot: Snapshot, host: &str, port: u16) -> CliResult<()> {
    let listener = tokio::net::TcpListener::bind((host, port))
        .await
        .map_err(|e| CliError::Serve(format!("cannot bind {host}:{port}: {e}")))?;
    axum::serve(listener, router(Arc::new(snapshot)))
        .await
        .map_err(|e| CliError::Serve(e.to_string()))
}
