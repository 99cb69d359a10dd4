//! Read-only HTTP search over loaded databases.
//!
//! `GET /xml/search.xml?agent=...&dataid=smoothfano4&c4=72&c5=360&printlevel=1`
//! answers with the Graded Ring Database XML layout.
pub mod xml;

use std::collections::BTreeMap;
use std::future::Future;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use num_bigint::BigInt;
use qperiod::kvdb::{self, Database, Filter, ParseError};

pub use xml::{render_results, PrintLevel};

/// Environment variable holding `dataid=path` overrides, comma separated.
pub const DATA_ENV: &str = "QPERIOD_DATA";

pub const SEARCH_PATH: &str = "/xml/search.xml";

/// Identifier of the store for one dimension: `smoothfano4`.
pub fn dataid_for_dimension(dimension: u8) -> String {
    format!("smoothfano{dimension}")
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}: cannot infer the dimension; expected a name like smooth_fano_4.txt")]
    UnknownFileName(PathBuf),
    #[error("malformed {DATA_ENV} entry '{0}', expected dataid=path")]
    BadOverride(String),
    #[error("dataid '{0}' does not end in a dimension and its file name does not give one")]
    NoDimension(String),
}

fn dimension_from_file_name(path: &Path) -> Option<u8> {
    let stem = path.file_name()?.to_str()?.strip_prefix("smooth_fano_")?;
    let digits = stem.strip_suffix(".txt")?;
    digits.parse().ok().filter(|d| (1..=4).contains(d))
}

fn dimension_from_dataid(dataid: &str) -> Option<u8> {
    let last = dataid.chars().last()?.to_digit(10)? as u8;
    (1..=4).contains(&last).then_some(last)
}

fn load_file(path: &Path, dimension: u8) -> Result<Database, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let db = kvdb::parse_database(&text, dimension).map_err(|source| LoadError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    for w in db.warnings() {
        log::warn!("{}: {w}", path.display());
    }
    Ok(db)
}

/// Immutable map from `dataid` to a loaded database.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    stores: BTreeMap<String, Arc<Database>>,
}

impl Catalog {
    pub fn new() -> Self {
        Catalog::default()
    }

    pub fn insert(&mut self, dataid: impl Into<String>, db: Database) {
        self.stores.insert(dataid.into(), Arc::new(db));
    }

    /// Store a database under its default id `smoothfanoN`.
    pub fn insert_default(&mut self, db: Database) {
        let id = dataid_for_dimension(db.dimension());
        self.insert(id, db);
    }

    pub fn get(&self, dataid: &str) -> Option<&Database> {
        self.stores.get(dataid).map(|a| a.as_ref())
    }

    pub fn dataids(&self) -> impl Iterator<Item = &str> {
        self.stores.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.stores.is_empty()
    }

    /// Load `smooth_fano_N.txt` files under their default ids, then apply
    /// `overrides` (the value of [`DATA_ENV`]) on top.
    pub fn load(files: &[PathBuf], overrides: Option<&str>) -> Result<Self, LoadError> {
        let mut cat = Catalog::new();
        for path in files {
            let dim = dimension_from_file_name(path)
                .ok_or_else(|| LoadError::UnknownFileName(path.clone()))?;
            cat.insert(dataid_for_dimension(dim), load_file(path, dim)?);
        }
        for entry in overrides.unwrap_or("").split(',').map(str::trim) {
            if entry.is_empty() {
                continue;
            }
            let (id, path) = entry
                .split_once('=')
                .filter(|(id, path)| !id.trim().is_empty() && !path.trim().is_empty())
                .ok_or_else(|| LoadError::BadOverride(entry.to_string()))?;
            let (id, path) = (id.trim(), PathBuf::from(path.trim()));
            let dim = dimension_from_file_name(&path)
                .or_else(|| dimension_from_dataid(id))
                .ok_or_else(|| LoadError::NoDimension(id.to_string()))?;
            cat.insert(id, load_file(&path, dim)?);
        }
        Ok(cat)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RequestError {
    #[error("missing parameter 'agent'; identify your application, e.g. agent=my_app")]
    MissingAgent,
    #[error("missing parameter 'dataid'")]
    MissingDataid,
    #[error("unknown dataid '{0}'")]
    UnknownDataid(String),
    #[error("parameter '{0}' given more than once")]
    Repeated(String),
    #[error("parameter '{key}' must be an integer, got '{value}'")]
    NotInteger { key: String, value: String },
    #[error("printlevel must be 1, 2 or 3, got '{0}'")]
    PrintLevel(String),
    #[error("unknown parameter '{0}'")]
    UnknownParameter(String),
}

/// A validated search request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRequest {
    pub agent: String,
    pub dataid: String,
    pub filter: Filter,
    pub level: PrintLevel,
}

impl SearchRequest {
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self, RequestError> {
        let mut seen = BTreeMap::new();
        for (k, v) in pairs {
            if seen.insert(k.as_str(), v.as_str()).is_some() {
                return Err(RequestError::Repeated(k.clone()));
            }
        }
        let integer = |key: &str, value: &str| {
            value.parse::<BigInt>().map_err(|_| RequestError::NotInteger {
                key: key.to_string(),
                value: value.to_string(),
            })
        };
        let mut filter = Filter::new();
        let mut level = PrintLevel::default();
        for (&k, &v) in &seen {
            match k {
                "agent" | "dataid" => {}
                "id" => {
                    let id = integer(k, v)?;
                    // ids are positive, so anything else simply matches nothing
                    filter.id = Some(u64::try_from(&id).unwrap_or(0));
                }
                "printlevel" => {
                    level = v
                        .parse::<u8>()
                        .ok()
                        .and_then(PrintLevel::new)
                        .ok_or_else(|| RequestError::PrintLevel(v.to_string()))?;
                }
                _ => match k.strip_prefix('c').and_then(|d| d.parse::<usize>().ok()) {
                    Some(d) if kvdb::QUERY_DEGREES.contains(&d) && k.len() == 2 => {
                        filter.coefficients.push((d, integer(k, v)?));
                    }
                    _ => return Err(RequestError::UnknownParameter(k.to_string())),
                },
            }
        }
        let agent = seen.get("agent").ok_or(RequestError::MissingAgent)?.to_string();
        let dataid = seen.get("dataid").ok_or(RequestError::MissingDataid)?.to_string();
        Ok(SearchRequest {
            agent,
            dataid,
            filter,
            level,
        })
    }
}

/// Answer a request against the catalog: the XML body or the reason for a 400.
pub fn respond(catalog: &Catalog, pairs: &[(String, String)]) -> Result<String, RequestError> {
    let req = SearchRequest::from_pairs(pairs)?;
    log::info!("search by agent '{}' on {}", req.agent, req.dataid);
    let db = catalog
        .get(&req.dataid)
        .ok_or_else(|| RequestError::UnknownDataid(req.dataid.clone()))?;
    let hits = db
        .query(&req.filter)
        .expect("request parser only admits c2..c6");
    Ok(render_results(&hits, req.level))
}

async fn search(
    State(catalog): State<Arc<Catalog>>,
    Query(pairs): Query<Vec<(String, String)>>,
) -> Response {
    match respond(&catalog, &pairs) {
        Ok(body) => ([(header::CONTENT_TYPE, "text/xml")], body).into_response(),
        Err(e) => {
            log::warn!("rejected request: {e}");
            (
                StatusCode::BAD_REQUEST,
                [(header::CONTENT_TYPE, "text/plain")],
                format!("error: {e}\n"),
            )
                .into_response()
        }
    }
}

pub fn router(catalog: Arc<Catalog>) -> Router {
    Router::new()
        .route(SEARCH_PATH, get(search))
        .with_state(catalog)
}

/// Serve until `shutdown` resolves; in-flight requests are completed.
pub async fn serve(
    catalog: Arc<Catalog>,
    listener: tokio::net::TcpListener,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    if let Ok(addr) = listener.local_addr() {
        log::info!(
            "serving {} on http://{addr}{SEARCH_PATH}",
            catalog.dataids().collect::<Vec<_>>().join(", ")
        );
    }
    axum::serve(listener, router(catalog))
        .with_graceful_shutdown(shutdown)
        .await
}
