//! HTTP and WebSocket sessions over the game engine.
//!
//! The machine side answers inside the human's request, so every response
//! already contains the counter-action. Each session has one mutex; events
//! are broadcast while it is held, which keeps stream order equal to version
//! order.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use g2048_core::harness::{default_max_turns, run_match_with, TranscriptHeader, POLICY_VERSION};
use g2048_core::{
    favourable_prefix, replay_transcript, Action, Actor, AdversaryMode, BoardShape, Engine, GameError, GameState,
    Outcome, Transcript,
};
use serde::{Deserialize, Serialize};
use tokio::sync::broadcast;

use crate::wire::{self, ActionJson, BoardJson, EventJson, Line, ShapeSpec};

/// Largest dimension the service accepts.
pub const MAX_SERVICE_DIM: usize = 3;

#[derive(Debug, Clone)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub detail: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, detail: impl Into<String>) -> Self {
        ApiError { status, code, detail: detail.into() }
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "session-not-found", format!("no session {id:?}"))
    }

    fn bad_request(detail: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad-request", detail)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { error: self.code.into(), detail: self.detail })).into_response()
    }
}

impl From<GameError> for ApiError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::GameOver => ApiError::new(StatusCode::CONFLICT, "game-over", e.to_string()),
            GameError::NotYourTurn { .. } => ApiError::new(StatusCode::CONFLICT, "not-your-turn", e.to_string()),
            GameError::IllegalAction(_) => ApiError::new(StatusCode::BAD_REQUEST, "illegal-action", e.to_string()),
            GameError::Strategy(_) => ApiError::new(StatusCode::CONFLICT, "game-over", e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HumanRole {
    Player,
    Computer,
    Observer,
}

impl HumanRole {
    fn controls(&self, actor: Actor) -> bool {
        matches!((self, actor), (HumanRole::Player, Actor::Player) | (HumanRole::Computer, Actor::Computer))
    }
}

fn default_role() -> HumanRole {
    HumanRole::Player
}

fn default_mode() -> String {
    "paper".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateGame {
    pub shape: ShapeSpec,
    #[serde(default = "default_role")]
    pub human_role: HumanRole,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionJson {
    pub id: String,
    pub shape: Vec<usize>,
    pub human_role: HumanRole,
    pub mode: String,
    pub mode_label: String,
    pub seed: u64,
    pub version: u64,
    pub to_act: String,
    pub over: bool,
    pub outcome: Option<String>,
    pub board: BoardJson,
    pub max_exponent: u8,
    pub favourable_prefix: usize,
    pub events: Vec<EventJson>,
    pub created_ms: u64,
    pub updated_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HintJson {
    pub version: u64,
    pub actor: String,
    pub action: ActionJson,
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum StreamMsg {
    /// Sent on connect and after a lagging receiver skips events.
    Snapshot { version: u64, session: SessionJson },
    Event {
        version: u64,
        #[serde(flatten)]
        event: EventJson,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaceBody {
    pub pos: Vec<usize>,
    pub exp: u8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoveBody {
    pub axis: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnakeQuery {
    pub shape: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnakeJson {
    pub shape: Vec<usize>,
    pub order: Vec<Vec<usize>>,
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

struct Inner {
    id: String,
    state: GameState,
    engine: Engine,
    role: HumanRole,
    version: u64,
    outcome: Option<Outcome>,
    max_turns: usize,
    created_ms: u64,
    updated_ms: u64,
    log: Option<File>,
}

impl Inner {
    fn header(&self) -> TranscriptHeader {
        TranscriptHeader {
            shape: self.state.shape().clone(),
            mode: self.state.mode,
            mode_label: self.engine.label().into(),
            seed: self.state.seed,
            policy_version: POLICY_VERSION.into(),
            max_turns: self.max_turns,
        }
    }

    fn to_json(&self) -> SessionJson {
        let b = &self.state.board;
        SessionJson {
            id: self.id.clone(),
            shape: b.shape().dims().to_vec(),
            human_role: self.role,
            mode: self.state.mode.as_str().into(),
            mode_label: self.engine.label().into(),
            seed: self.state.seed,
            version: self.version,
            to_act: self.state.to_act.as_str().into(),
            over: self.state.is_over(),
            outcome: self.outcome.map(|o| o.as_str().into()),
            board: BoardJson::from_board(b),
            max_exponent: self.state.max_exponent(),
            favourable_prefix: favourable_prefix(b),
            events: self.state.history.iter().map(EventJson::from_event).collect(),
            created_ms: self.created_ms,
            updated_ms: self.updated_ms,
        }
    }

    fn persist(&mut self, line: &Line) {
        if let Some(f) = self.log.as_mut() {
            // persistence is best effort; the in-memory session stays authoritative
            let _ = writeln!(f, "{}", wire::to_line(line));
        }
    }

    /// Broadcasts and persists every event after `from`.
    fn publish(&mut self, from: usize, tx: &broadcast::Sender<String>) {
        for i in from..self.state.history.len() {
            let ev = EventJson::from_event(&self.state.history[i]);
            self.version += 1;
            self.persist(&Line::Event(ev.clone()));
            let msg = StreamMsg::Event { version: self.version, event: ev };
            let _ = tx.send(serde_json::to_string(&msg).expect("serialisable"));
        }
        self.updated_ms = now_ms();
        if self.outcome.is_none() && self.state.is_over() {
            self.finish(Outcome::GameOver);
        }
    }

    fn finish(&mut self, o: Outcome) {
        self.outcome = Some(o);
        let t = Transcript { header: self.header(), events: self.state.history.clone(), outcome: Some(o) };
        self.persist(&wire::end_line(&t, o));
    }

    /// Plays machine turns until the human is to act or the game ends.
    fn run_machine(&mut self) -> Result<(), GameError> {
        while !self.state.is_over() && !self.role.controls(self.state.to_act) {
            if self.state.history.len() >= self.max_turns {
                self.finish(Outcome::TurnCap);
                break;
            }
            g2048_core::run_policy_turn(&mut self.state, &mut self.engine)?;
        }
        Ok(())
    }

    fn human(&mut self, actor: Actor, action: Action, tx: &broadcast::Sender<String>) -> Result<(), ApiError> {
        if !self.role.controls(actor) {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                "not-your-turn",
                format!("the human plays {:?} in this session", self.role),
            ));
        }
        if self.outcome.is_some() {
            return Err(GameError::GameOver.into());
        }
        let from = self.state.history.len();
        self.state.apply(actor, action, None)?;
        let res = self.run_machine();
        self.publish(from, tx);
        res.map_err(ApiError::from)
    }
}

struct Session {
    inner: Mutex<Inner>,
    tx: broadcast::Sender<String>,
}

/// Shared service state.
#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Arc<Session>>>>,
    next: Arc<AtomicU64>,
    persist_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(persist_dir: Option<PathBuf>) -> Self {
        AppState { persist_dir, ..Default::default() }
    }

    fn session(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.sessions.read().expect("lock").get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }

    fn create(&self, req: CreateGame) -> Result<SessionJson, ApiError> {
        let shape = req
            .shape
            .resolve()
            .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid-shape", e.to_string()))?;
        if shape.d() > MAX_SERVICE_DIM {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "unsupported-dimension",
                format!("the service supports at most {MAX_SERVICE_DIM} dimensions, got {}", shape.d()),
            ));
        }
        let mode = AdversaryMode::parse(&req.mode)
            .ok_or_else(|| ApiError::new(StatusCode::BAD_REQUEST, "invalid-mode", format!("unknown mode {:?}", req.mode)))?;
        let id = format!("g{}", self.next.fetch_add(1, Ordering::Relaxed) + 1);
        let log = match &self.persist_dir {
            Some(dir) => Some(
                OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(dir.join(format!("{id}.jsonl")))
                    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "io", e.to_string()))?,
            ),
            None => None,
        };
        let ts = now_ms();
        let mut inner = Inner {
            id: id.clone(),
            state: GameState::new(&shape, mode, req.seed),
            engine: Engine::new(&shape, mode),
            role: req.human_role,
            version: 0,
            outcome: None,
            max_turns: default_max_turns(&shape),
            created_ms: ts,
            updated_ms: ts,
            log,
        };
        let header = inner.header();
        inner.persist(&wire::header_line(&header));
        let (tx, _) = broadcast::channel(1024);
        if req.human_role == HumanRole::Observer {
            let t = run_match_with(&mut inner.engine, req.seed, inner.max_turns);
            inner.state = replay_transcript(&t).expect("machine transcripts replay");
            inner.publish(0, &tx);
            if let Some(o) = t.outcome {
                if inner.outcome.is_none() {
                    inner.finish(o);
                }
            }
        } else {
            inner.run_machine()?;
            inner.publish(0, &tx);
        }
        let json = inner.to_json();
        let s = Arc::new(Session { inner: Mutex::new(inner), tx });
        self.sessions.write().expect("lock").insert(id, s);
        Ok(json)
    }
}

fn body<T>(r: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    r.map(|Json(v)| v).map_err(|e| ApiError::bad_request(e.body_text()))
}

async fn create_game(
    State(app): State<AppState>,
    req: Result<Json<CreateGame>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionJson>), ApiError> {
    let req = body(req)?;
    let json = tokio::task::spawn_blocking(move || app.create(req))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;
    Ok((StatusCode::CREATED, Json(json)))
}

async fn get_game(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<SessionJson>, ApiError> {
    let s = app.session(&id)?;
    let json = s.inner.lock().expect("lock").to_json();
    Ok(Json(json))
}

fn act(app: &AppState, id: &str, actor: Actor, action: Action) -> Result<SessionJson, ApiError> {
    let s = app.session(id)?;
    let mut inner = s.inner.lock().expect("lock");
    inner.human(actor, action, &s.tx)?;
    Ok(inner.to_json())
}

async fn post_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
    req: Result<Json<MoveBody>, JsonRejection>,
) -> Result<Json<SessionJson>, ApiError> {
    let m = body(req)?;
    let action = ActionJson::Move { axis: m.axis, sign: m.sign }
        .to_action()
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "illegal-action", e.to_string()))?;
    let json = tokio::task::spawn_blocking(move || act(&app, &id, Actor::Player, action))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;
    Ok(Json(json))
}

async fn post_place(
    State(app): State<AppState>,
    Path(id): Path<String>,
    req: Result<Json<PlaceBody>, JsonRejection>,
) -> Result<Json<SessionJson>, ApiError> {
    let p = body(req)?;
    let action = ActionJson::Place { pos: p.pos, exp: p.exp }.to_action().map_err(|e| ApiError::bad_request(e.to_string()))?;
    let json = tokio::task::spawn_blocking(move || act(&app, &id, Actor::Computer, action))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;
    Ok(Json(json))
}

async fn get_hint(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<HintJson>, ApiError> {
    let s = app.session(&id)?;
    let hint = tokio::task::spawn_blocking(move || {
        let mut inner = s.inner.lock().expect("lock");
        let Inner { state, engine, version, .. } = &mut *inner;
        let d = engine.decide(state)?;
        Ok::<_, ApiError>(HintJson {
            version: *version,
            actor: state.to_act.as_str().into(),
            action: ActionJson::from_action(&d.action),
            tag: d.tag.as_str().into(),
        })
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;
    Ok(Json(hint))
}

async fn stream(
    State(app): State<AppState>,
    Path(id): Path<String>,
    ws: WebSocketUpgrade,
) -> Result<Response, ApiError> {
    let s = app.session(&id)?;
    Ok(ws.on_upgrade(move |socket| pump(socket, s)))
}

fn snapshot(s: &Session) -> (String, broadcast::Receiver<String>) {
    let inner = s.inner.lock().expect("lock");
    let rx = s.tx.subscribe();
    let msg = StreamMsg::Snapshot { version: inner.version, session: inner.to_json() };
    (serde_json::to_string(&msg).expect("serialisable"), rx)
}

async fn pump(mut socket: WebSocket, s: Arc<Session>) {
    let (first, mut rx) = snapshot(&s);
    if socket.send(Message::Text(first.into())).await.is_err() {
        return;
    }
    loop {
        tokio::select! {
            msg = rx.recv() => match msg {
                Ok(text) => {
                    if socket.send(Message::Text(text.into())).await.is_err() {
                        return;
                    }
                }
                Err(broadcast::error::RecvError::Lagged(_)) => {
                    let (snap, fresh) = snapshot(&s);
                    rx = fresh;
                    if socket.send(Message::Text(snap.into())).await.is_err() {
                        return;
                    }
                }
                Err(broadcast::error::RecvError::Closed) => return,
            },
            incoming = socket.recv() => match incoming {
                Some(Ok(Message::Close(_))) | None | Some(Err(_)) => return,
                Some(Ok(_)) => {}
            },
        }
    }
}

async fn get_snake(q: Result<Query<SnakeQuery>, QueryRejection>) -> Result<Json<SnakeJson>, ApiError> {
    let Query(q) = q.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let shape = BoardShape::parse(&q.shape)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid-shape", e.to_string()))?;
    if shape.cell_count() > 1 << 16 {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "invalid-shape", "shape too large to list"));
    }
    let t = g2048_core::SnakeTable::new(&shape);
    let order = t.order().iter().map(|&i| shape.position(i).0).collect();
    Ok(Json(SnakeJson { shape: shape.dims().to_vec(), order }))
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/move", post(post_move))
        .route("/games/{id}/place", post(post_place))
        .route("/games/{id}/hint", get(get_hint))
        .route("/games/{id}/stream", get(stream))
        .route("/snake", get(get_snake))
        .with_state(app)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, persist_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(persist_dir))).await
}
