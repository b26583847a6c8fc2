//! Remote oracle speaking a newline-delimited query protocol over TCP.
//!
//! Requests are single lines: `N <label>` asks for the hyperedges incident
//! to a node, `E <label>` for the members of a hyperedge. Responses are
//! `OK` followed by space-separated labels, or `ERR` followed by a message.
//! Labels must therefore be whitespace-free, which edge-list inputs
//! guarantee.
//!
//! The client interns remote labels into dense local ids in first-arrival
//! order, so a walk driven through it makes byte-identical RNG decisions to
//! one driven over the same hypergraph in memory: answers arrive in the
//! same order and only list positions and id equality ever matter.
//! Timeouts, reconnect retries, and request pacing are tunable through
//! `HYPERWALK_*` environment variables.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::hypergraph::{EdgeId, Hypergraph, NodeId};
use crate::oracle::{Oracle, OracleError, QueryStats};

pub const ENDPOINT_VAR: &str = "HYPERWALK_ENDPOINT";
pub const TIMEOUT_VAR: &str = "HYPERWALK_TIMEOUT_MS";
pub const RETRIES_VAR: &str = "HYPERWALK_RETRIES";
pub const RATE_LIMIT_VAR: &str = "HYPERWALK_RATE_LIMIT";

/// Connection settings for [`RemoteOracle`].
#[derive(Debug, Clone, PartialEq)]
pub struct RemoteConfig {
    /// `host:port` of the oracle server.
    pub endpoint: String,
    /// Per-operation read/write timeout.
    pub timeout: Duration,
    /// How many times a failed request is retried on a fresh connection.
    pub retries: u32,
    /// Maximum request rate; `None` sends as fast as the server answers.
    pub requests_per_second: Option<f64>,
}

impl RemoteConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            timeout: Duration::from_millis(5000),
            retries: 2,
            requests_per_second: None,
        }
    }

    /// Builds a config from an explicit endpoint or `HYPERWALK_ENDPOINT`,
    /// with `HYPERWALK_TIMEOUT_MS`, `HYPERWALK_RETRIES`, and
    /// `HYPERWALK_RATE_LIMIT` (requests per second) overriding the
    /// defaults of 5000 ms, 2 retries, and unlimited rate.
    pub fn resolve(endpoint: Option<String>) -> Result<Self, OracleError> {
        let endpoint = match endpoint {
            Some(e) => e,
            None => std::env::var(ENDPOINT_VAR).map_err(|_| {
                OracleError::Protocol(format!(
                    "no endpoint given and {ENDPOINT_VAR} is not set"
                ))
            })?,
        };
        let mut config = RemoteConfig::new(endpoint);
        if let Ok(raw) = std::env::var(TIMEOUT_VAR) {
            let ms: u64 = raw.parse().map_err(|_| {
                OracleError::Protocol(format!("bad {TIMEOUT_VAR} value {raw:?}"))
            })?;
            config.timeout = Duration::from_millis(ms);
        }
        if let Ok(raw) = std::env::var(RETRIES_VAR) {
            config.retries = raw.parse().map_err(|_| {
                OracleError::Protocol(format!("bad {RETRIES_VAR} value {raw:?}"))
            })?;
        }
        if let Ok(raw) = std::env::var(RATE_LIMIT_VAR) {
            let rate: f64 = raw.parse().map_err(|_| {
                OracleError::Protocol(format!("bad {RATE_LIMIT_VAR} value {raw:?}"))
            })?;
            if !(rate.is_finite() && rate > 0.0) {
                return Err(OracleError::Protocol(format!(
                    "bad {RATE_LIMIT_VAR} value {raw:?}"
                )));
            }
            config.requests_per_second = Some(rate);
        }
        Ok(config)
    }
}

/// Dense first-arrival label interner, one per id space.
#[derive(Default)]
struct Interner {
    labels: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, label: &str) -> u32 {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len() as u32;
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        id
    }

    fn label(&self, id: u32) -> Option<&str> {
        self.labels.get(id as usize).map(String::as_str)
    }
}

/// Oracle backed by a remote server; implements the same trait as the
/// in-memory oracle, so walks and budgets are backend-agnostic.
pub struct RemoteOracle {
    config: RemoteConfig,
    reader: BufReader<TcpStream>,
    writer: TcpStream,
    nodes: Interner,
    edges: Interner,
    stats: QueryStats,
    next_slot: Instant,
}

impl RemoteOracle {
    pub fn connect(config: RemoteConfig) -> Result<Self, OracleError> {
        let (reader, writer) = open_connection(&config)?;
        Ok(Self {
            config,
            reader,
            writer,
            nodes: Interner::default(),
            edges: Interner::default(),
            stats: QueryStats::default(),
            next_slot: Instant::now(),
        })
    }

    fn pace(&mut self) {
        let Some(rate) = self.config.requests_per_second else {
            return;
        };
        let interval = Duration::from_secs_f64(1.0 / rate);
        let now = Instant::now();
        if now < self.next_slot {
            std::thread::sleep(self.next_slot - now);
        }
        self.next_slot = self.next_slot.max(now) + interval;
    }

    /// Sends one request line and returns the `OK` tokens; `ERR` responses
    /// surface as `Err(the message)`. Connection-level failures reconnect
    /// and resend, which is safe because queries are idempotent reads.
    fn request(&mut self, line: &str) -> Result<Result<Vec<String>, String>, OracleError> {
        self.pace();
        let mut last_err: Option<std::io::Error> = None;
        for attempt in 0..=self.config.retries {
            if attempt > 0 {
                let (reader, writer) = open_connection(&self.config)?;
                self.reader = reader;
                self.writer = writer;
            }
            match self.exchange(line) {
                Ok(response) => return parse_response(&response).map_err(OracleError::Protocol),
                Err(err) => last_err = Some(err),
            }
        }
        Err(OracleError::Io(last_err.expect("at least one attempt")))
    }

    fn exchange(&mut self, line: &str) -> std::io::Result<String> {
        self.writer.write_all(line.as_bytes())?;
        self.writer.write_all(b"\n")?;
        self.writer.flush()?;
        let mut response = String::new();
        if self.reader.read_line(&mut response)? == 0 {
            return Err(std::io::Error::new(
                std::io::ErrorKind::UnexpectedEof,
                "server closed the connection",
            ));
        }
        Ok(response)
    }
}

fn open_connection(
    config: &RemoteConfig,
) -> Result<(BufReader<TcpStream>, TcpStream), OracleError> {
    let addr = config
        .endpoint
        .to_socket_addrs()?
        .next()
        .ok_or_else(|| {
            OracleError::Protocol(format!("endpoint {:?} resolves to no address", config.endpoint))
        })?;
    let stream = TcpStream::connect_timeout(&addr, config.timeout)?;
    stream.set_read_timeout(Some(config.timeout))?;
    stream.set_write_timeout(Some(config.timeout))?;
    stream.set_nodelay(true)?;
    let writer = stream.try_clone()?;
    Ok((BufReader::new(stream), writer))
}

fn parse_response(raw: &str) -> Result<Result<Vec<String>, String>, String> {
    let line = raw.trim_end_matches(['\r', '\n']);
    let mut tokens = line.split_whitespace();
    match tokens.next() {
        Some("OK") => Ok(Ok(tokens.map(str::to_string).collect())),
        Some("ERR") => {
            let start = line.find("ERR").unwrap() + 3;
            Ok(Err(line[start..].trim().to_string()))
        }
        _ => Err(format!("unexpected response line {line:?}")),
    }
}

impl Oracle for RemoteOracle {
    fn query_node(&mut self, i: NodeId) -> Result<Vec<EdgeId>, OracleError> {
        let label = self
            .nodes
            .label(i)
            .ok_or_else(|| OracleError::UnknownNode(i.to_string()))?
            .to_string();
        match self.request(&format!("N {label}"))? {
            Ok(tokens) => {
                self.stats.node_queries += 1;
                Ok(tokens.iter().map(|t| self.edges.intern(t)).collect())
            }
            Err(_) => Err(OracleError::UnknownNode(label)),
        }
    }

    fn query_hyperedge(&mut self, alpha: EdgeId) -> Result<Vec<NodeId>, OracleError> {
        let label = self
            .edges
            .label(alpha)
            .ok_or_else(|| OracleError::UnknownHyperedge(alpha.to_string()))?
            .to_string();
        match self.request(&format!("E {label}"))? {
            Ok(tokens) => {
                self.stats.hyperedge_queries += 1;
                Ok(tokens.iter().map(|t| self.nodes.intern(t)).collect())
            }
            Err(_) => Err(OracleError::UnknownHyperedge(label)),
        }
    }

    fn stats(&self) -> QueryStats {
        self.stats
    }

    fn resolve_node_label(&mut self, label: &str) -> Result<NodeId, OracleError> {
        if label.split_whitespace().count() != 1 {
            return Err(OracleError::UnknownNode(label.to_string()));
        }
        Ok(self.nodes.intern(label))
    }

    fn node_label(&self, i: NodeId) -> String {
        self.nodes
            .label(i)
            .map(str::to_string)
            .unwrap_or_else(|| i.to_string())
    }

    fn hyperedge_label(&self, alpha: EdgeId) -> String {
        self.edges
            .label(alpha)
            .map(str::to_string)
            .unwrap_or_else(|| alpha.to_string())
    }
}

/// Behavior knobs for [`MockServer`], mostly for exercising client
/// resilience.
#[derive(Debug, Clone, Copy, Default)]
pub struct ServerOptions {
    /// Close each connection after answering this many requests; the
    /// client is expected to reconnect and resend.
    pub drop_connection_after: Option<u64>,
}

/// In-process TCP server answering protocol queries from a hypergraph
/// snapshot. Node labels are the hypergraph's, hyperedge labels its edge
/// ids, and answers list labels in ascending id order — exactly the
/// in-memory oracle's answer order.
pub struct MockServer {
    addr: SocketAddr,
    shutdown: Arc<AtomicBool>,
    accept_thread: Option<std::thread::JoinHandle<()>>,
}

impl MockServer {
    pub fn spawn(h: Hypergraph) -> std::io::Result<MockServer> {
        MockServer::spawn_with_options(h, ServerOptions::default())
    }

    pub fn spawn_with_options(
        h: Hypergraph,
        options: ServerOptions,
    ) -> std::io::Result<MockServer> {
        MockServer::spawn_at("127.0.0.1:0", h, options)
    }

    /// Binds a specific address; port 0 picks an ephemeral port, reported
    /// by [`MockServer::addr`].
    pub fn spawn_at(
        bind: &str,
        h: Hypergraph,
        options: ServerOptions,
    ) -> std::io::Result<MockServer> {
        let listener = TcpListener::bind(bind)?;
        listener.set_nonblocking(true)?;
        let addr = listener.local_addr()?;
        let shutdown = Arc::new(AtomicBool::new(false));
        let flag = Arc::clone(&shutdown);
        let shared = Arc::new(h);
        let accept_thread = std::thread::spawn(move || {
            while !flag.load(Ordering::Relaxed) {
                match listener.accept() {
                    Ok((stream, _)) => {
                        let h = Arc::clone(&shared);
                        std::thread::spawn(move || serve_connection(stream, &h, options));
                    }
                    Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => {
                        std::thread::sleep(Duration::from_millis(2));
                    }
                    Err(_) => break,
                }
            }
        });
        Ok(MockServer {
            addr,
            shutdown,
            accept_thread: Some(accept_thread),
        })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// `host:port` string suitable for [`RemoteConfig::new`].
    pub fn endpoint(&self) -> String {
        self.addr.to_string()
    }

    pub fn shutdown(mut self) {
        self.stop();
    }

    fn stop(&mut self) {
        self.shutdown.store(true, Ordering::Relaxed);
        if let Some(handle) = self.accept_thread.take() {
            let _ = handle.join();
        }
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.stop();
    }
}

fn serve_connection(stream: TcpStream, h: &Hypergraph, options: ServerOptions) {
    let _ = stream.set_nodelay(true);
    let Ok(write_half) = stream.try_clone() else {
        return;
    };
    let mut writer = std::io::BufWriter::new(write_half);
    let reader = BufReader::new(stream);
    for (answered, line) in reader.lines().enumerate() {
        if options.drop_connection_after == Some(answered as u64) {
            break;
        }
        let Ok(line) = line else { break };
        let reply = answer(&line, h);
        if writer
            .write_all(reply.as_bytes())
            .and_then(|_| writer.write_all(b"\n"))
            .and_then(|_| writer.flush())
            .is_err()
        {
            break;
        }
    }
}

fn answer(line: &str, h: &Hypergraph) -> String {
    let mut tokens = line.split_whitespace();
    let (kind, label) = match (tokens.next(), tokens.next(), tokens.next()) {
        (Some(kind), Some(label), None) => (kind, label),
        _ => return "ERR malformed request".to_string(),
    };
    match kind {
        "N" => match h.node_id(label) {
            Some(i) => {
                let answers: Vec<String> = h
                    .incident_hyperedges(i)
                    .expect("resolved id is valid")
                    .iter()
                    .map(|alpha| alpha.to_string())
                    .collect();
                format!("OK {}", answers.join(" ")).trim_end().to_string()
            }
            None => format!("ERR unknown node {label}"),
        },
        "E" => match label.parse::<EdgeId>().ok().and_then(|a| h.hyperedge_members(a)) {
            Some(members) => {
                let answers: Vec<String> = members
                    .iter()
                    .map(|&i| h.node_label(i).expect("member id is valid").to_string())
                    .collect();
                format!("OK {}", answers.join(" ")).trim_end().to_string()
            }
            None => format!("ERR unknown hyperedge {label}"),
        },
        _ => "ERR malformed request".to_string(),
    }
}
