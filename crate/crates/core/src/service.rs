//! HTTP/JSON game service.
//!
//! Sessions live in memory and every mutation is appended to a JSON-lines
//! journal before it is committed, so a restart can rebuild all sessions by
//! replaying the journal. Mutations on one session are serialized by that
//! session's lock; distinct sessions proceed independently.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::chocolate::{Axis, Cut};
use crate::dyadic::Dyadic;
use crate::engine::{Outcome, Player};
use crate::error::Error;
use crate::solver::{DarkSquares, RookBoard, SumGame, SumMove};

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("{0}")]
    BadRequest(String),
    #[error("no game with id {0:?}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Unprocessable(String),
    #[error("{0}")]
    Internal(String),
}

impl ServiceError {
    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl From<Error> for ServiceError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => ServiceError::BadRequest(e.to_string()),
            Error::WrongTurn(_) => ServiceError::Conflict(e.to_string()),
            _ => ServiceError::Unprocessable(e.to_string()),
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = self.status();
        let body = serde_json::json!({ "error": self.to_string(), "status": status.as_u16() });
        (status, Json(body)).into_response()
    }
}

type ServiceResult<T> = std::result::Result<T, ServiceError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub mover: Player,
    pub component: usize,
    pub axis: Axis,
    pub keep: u32,
    pub engine: bool,
}

impl MoveRecord {
    pub fn sum_move(&self) -> SumMove {
        SumMove {
            component: self.component,
            cut: Cut {
                axis: self.axis,
                keep: self.keep,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSession {
    pub id: String,
    pub initial: SumGame,
    pub state: SumGame,
    pub human: Option<Player>,
    pub history: Vec<MoveRecord>,
    pub created_ms: u64,
    pub updated_ms: u64,
}

impl GameSession {
    /// Rebuilds the current state from the initial position and history.
    pub fn replayed_state(&self) -> crate::Result<SumGame> {
        let mut state = self.initial.clone();
        for rec in &self.history {
            state = state.play_as(rec.mover, rec.sum_move())?;
        }
        Ok(state)
    }

    fn to_move(&self) -> Player {
        self.state.to_move.unwrap_or(Player::Left)
    }

    fn terminal(&self) -> bool {
        !self.state.has_moves(self.to_move())
    }
}

/// One journal line.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "lowercase")]
enum JournalEvent {
    Create {
        id: String,
        bars: String,
        first: Player,
        human: Option<Player>,
        at_ms: u64,
    },
    Move {
        id: String,
        #[serde(flatten)]
        record: MoveRecord,
        at_ms: u64,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    /// Bar notation, e.g. `"-(2,4) -(1,3) +(2,3) +(2,0)"`.
    pub bars: Option<String>,
    /// Rook lines, e.g. `"B 2 3\nW 1 1"`.
    pub rooks: Option<String>,
    #[serde(default)]
    pub dark: DarkSquares,
    pub board_size: Option<u32>,
    pub human: Option<Player>,
    pub first: Option<Player>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    pub player: Option<Player>,
    pub component: usize,
    pub axis: Axis,
    pub keep: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentEval {
    pub bar: String,
    pub value: Dyadic,
    pub approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    /// Exact total.
    pub value: Dyadic,
    /// Decimal rendering of `value`; approximate.
    pub approx: f64,
    pub outcome: Outcome,
    pub components: Vec<ComponentEval>,
    pub to_move: Player,
    pub terminal: bool,
    pub winner: Option<Player>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub bars: String,
    pub initial: String,
    pub human: Option<Player>,
    pub to_move: Player,
    pub history: Vec<MoveRecord>,
    pub created_ms: u64,
    pub updated_ms: u64,
    pub eval: Evaluation,
    pub terminal: bool,
    pub winner: Option<Player>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveView {
    pub component: usize,
    pub bar: String,
    pub axis: Axis,
    pub keep: u32,
    pub resulting_value: Dyadic,
    pub approx: f64,
    pub squares_removed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MovesView {
    pub player: Player,
    pub moves: Vec<MoveView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveResult {
    pub played: MoveRecord,
    pub resulting_value: Dyadic,
    pub session: SessionView,
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn evaluate(session: &GameSession) -> ServiceResult<Evaluation> {
    let game = &session.state;
    let value = game.value()?;
    let mut components = Vec::with_capacity(game.bars.len());
    for bar in &game.bars {
        let v = bar.value()?;
        components.push(ComponentEval {
            bar: bar.to_string(),
            value: v,
            approx: v.to_f64(),
        });
    }
    let terminal = session.terminal();
    Ok(Evaluation {
        value,
        approx: value.to_f64(),
        outcome: game.outcome()?,
        components,
        to_move: session.to_move(),
        terminal,
        winner: terminal.then(|| session.to_move().opponent()),
    })
}

fn view(session: &GameSession) -> ServiceResult<SessionView> {
    let eval = evaluate(session)?;
    Ok(SessionView {
        id: session.id.clone(),
        bars: session.state.to_string(),
        initial: session.initial.to_string(),
        human: session.human,
        to_move: session.to_move(),
        history: session.history.clone(),
        created_ms: session.created_ms,
        updated_ms: session.updated_ms,
        terminal: eval.terminal,
        winner: eval.winner,
        eval,
    })
}

pub struct GameService {
    sessions: RwLock<HashMap<String, Arc<Mutex<GameSession>>>>,
    journal: Mutex<Option<File>>,
    journal_path: Option<PathBuf>,
}

impl GameService {
    /// A service that keeps no journal.
    pub fn in_memory() -> Self {
        GameService {
            sessions: RwLock::new(HashMap::new()),
            journal: Mutex::new(None),
            journal_path: None,
        }
    }

    /// Opens (or creates) the journal at `path`, replaying any events in it.
    pub fn with_journal(path: impl AsRef<Path>) -> ServiceResult<Self> {
        let path = path.as_ref();
        let service = GameService {
            sessions: RwLock::new(HashMap::new()),
            journal: Mutex::new(None),
            journal_path: Some(path.to_path_buf()),
        };
        if path.exists() {
            let file = File::open(path).map_err(|e| io_error(path, e))?;
            for (line_no, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| io_error(path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                let event: JournalEvent = serde_json::from_str(&line).map_err(|e| {
                    ServiceError::Internal(format!("journal line {}: {e}", line_no + 1))
                })?;
                service.apply(event).map_err(|e| {
                    ServiceError::Internal(format!("journal line {}: {e}", line_no + 1))
                })?;
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| io_error(path, e))?;
        *service.journal.lock().unwrap() = Some(file);
        Ok(service)
    }

    pub fn journal_path(&self) -> Option<&Path> {
        self.journal_path.as_deref()
    }

    pub fn session_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().unwrap().keys().cloned().collect();
        ids.sort();
        ids
    }

    /// A copy of the session, for inspection.
    pub fn snapshot(&self, id: &str) -> ServiceResult<GameSession> {
        Ok(self.session(id)?.lock().unwrap().clone())
    }

    fn session(&self, id: &str) -> ServiceResult<Arc<Mutex<GameSession>>> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }

    fn record(&self, event: &JournalEvent) -> ServiceResult<()> {
        let mut guard = self.journal.lock().unwrap();
        if let Some(file) = guard.as_mut() {
            let mut line =
                serde_json::to_string(event).map_err(|e| ServiceError::Internal(e.to_string()))?;
            line.push('\n');
            file.write_all(line.as_bytes())
                .and_then(|_| file.flush())
                .map_err(|e| ServiceError::Internal(format!("journal write failed: {e}")))?;
        }
        Ok(())
    }

    /// Applies a replayed event without journaling it again.
    fn apply(&self, event: JournalEvent) -> ServiceResult<()> {
        match event {
            JournalEvent::Create {
                id,
                bars,
                first,
                human,
                at_ms,
            } => {
                let game: SumGame = bars.parse()?;
                self.insert(new_session(id, game.with_to_move(first), human, at_ms));
            }
            JournalEvent::Move { id, record, at_ms } => {
                let session = self.session(&id)?;
                let mut s = session.lock().unwrap();
                s.state = s.state.play_as(record.mover, record.sum_move())?;
                s.history.push(record);
                s.updated_ms = at_ms;
            }
        }
        Ok(())
    }

    fn insert(&self, session: GameSession) {
        self.sessions
            .write()
            .unwrap()
            .insert(session.id.clone(), Arc::new(Mutex::new(session)));
    }

    pub fn create(&self, req: CreateRequest) -> ServiceResult<SessionView> {
        let game = match (&req.bars, &req.rooks) {
            (Some(bars), None) => bars.parse::<SumGame>()?,
            (None, Some(rooks)) => {
                let mut board = RookBoard::parse(rooks)?;
                board.dark = req.dark;
                if let Some(size) = req.board_size {
                    board.size = size;
                }
                board
                    .to_sum()
                    .map_err(|e| ServiceError::BadRequest(e.to_string()))?
            }
            _ => {
                return Err(ServiceError::BadRequest(
                    "give exactly one of \"bars\" or \"rooks\"".into(),
                ))
            }
        };
        game.value()
            .map_err(|e| ServiceError::BadRequest(format!("cannot evaluate {game}: {e}")))?;
        let first = req.first.unwrap_or(Player::Left);
        let id = uuid::Uuid::new_v4().simple().to_string();
        let at_ms = now_ms();
        let session = new_session(id.clone(), game.with_to_move(first), req.human, at_ms);
        self.record(&JournalEvent::Create {
            id,
            bars: session.initial.to_string(),
            first,
            human: req.human,
            at_ms,
        })?;
        let out = view(&session)?;
        self.insert(session);
        Ok(out)
    }

    pub fn get(&self, id: &str) -> ServiceResult<SessionView> {
        view(&self.session(id)?.lock().unwrap())
    }

    pub fn eval(&self, id: &str) -> ServiceResult<Evaluation> {
        evaluate(&self.session(id)?.lock().unwrap())
    }

    /// Legal moves for `player` (default: the side to move) with the total
    /// each one leads to.
    pub fn moves(&self, id: &str, player: Option<Player>) -> ServiceResult<MovesView> {
        let session = self.session(id)?;
        let s = session.lock().unwrap();
        let player = player.unwrap_or_else(|| s.to_move());
        let moves = s
            .state
            .scored_moves(player)?
            .into_iter()
            .map(|m| MoveView {
                component: m.mv.component,
                bar: s.state.bars[m.mv.component].to_string(),
                axis: m.mv.cut.axis,
                keep: m.mv.cut.keep,
                resulting_value: m.resulting_value,
                approx: m.resulting_value.to_f64(),
                squares_removed: m.squares_removed,
            })
            .collect();
        Ok(MovesView { player, moves })
    }

    /// Applies a human move.
    pub fn play(&self, id: &str, req: MoveRequest) -> ServiceResult<MoveResult> {
        let session = self.session(id)?;
        let mut s = session.lock().unwrap();
        let to_move = s.to_move();
        let mover = req.player.unwrap_or(to_move);
        if mover != to_move {
            return Err(ServiceError::Conflict(format!(
                "it is {to_move}'s turn, not {mover}'s"
            )));
        }
        if let Some(human) = s.human {
            if human != mover {
                return Err(ServiceError::Conflict(format!(
                    "the human plays {human}; ask for an engine move instead"
                )));
            }
        }
        let record = MoveRecord {
            mover,
            component: req.component,
            axis: req.axis,
            keep: req.keep,
            engine: false,
        };
        self.commit(&mut s, record)
    }

    /// Lets the engine move for the side to move.
    pub fn engine_move(&self, id: &str) -> ServiceResult<MoveResult> {
        let session = self.session(id)?;
        let mut s = session.lock().unwrap();
        let mover = s.to_move();
        if s.human == Some(mover) {
            return Err(ServiceError::Conflict(format!(
                "it is the human's ({mover}) turn"
            )));
        }
        let best = s
            .state
            .best_move(mover)?
            .ok_or_else(|| ServiceError::Conflict(format!("game over: {mover} has no move")))?;
        // one-ply re-check: no alternative may lead to a strictly better total
        for alt in s.state.scored_moves(mover)? {
            let better = match mover {
                Player::Left => alt.resulting_value > best.resulting_value,
                Player::Right => alt.resulting_value < best.resulting_value,
            };
            if better {
                return Err(ServiceError::Internal(format!(
                    "engine chose {} worth {}, but {} is worth {}",
                    best.mv, best.resulting_value, alt.mv, alt.resulting_value
                )));
            }
        }
        let record = MoveRecord {
            mover,
            component: best.mv.component,
            axis: best.mv.cut.axis,
            keep: best.mv.cut.keep,
            engine: true,
        };
        self.commit(&mut s, record)
    }

    fn commit(&self, s: &mut GameSession, record: MoveRecord) -> ServiceResult<MoveResult> {
        let next = s.state.play_as(record.mover, record.sum_move())?;
        let resulting_value = next.value()?;
        let at_ms = now_ms().max(s.updated_ms);
        self.record(&JournalEvent::Move {
            id: s.id.clone(),
            record,
            at_ms,
        })?;
        s.state = next;
        s.history.push(record);
        s.updated_ms = at_ms;
        Ok(MoveResult {
            played: record,
            resulting_value,
            session: view(s)?,
        })
    }
}

fn new_session(id: String, game: SumGame, human: Option<Player>, at_ms: u64) -> GameSession {
    GameSession {
        id,
        initial: game.clone(),
        state: game,
        human,
        history: Vec::new(),
        created_ms: at_ms,
        updated_ms: at_ms,
    }
}

fn io_error(path: &Path, e: std::io::Error) -> ServiceError {
    ServiceError::Internal(format!("{}: {e}", path.display()))
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &Bytes) -> ServiceResult<T> {
    serde_json::from_slice(body)
        .map_err(|e| ServiceError::BadRequest(format!("bad request body: {e}")))
}

#[derive(Deserialize)]
struct PlayerQuery {
    player: Option<String>,
}

type Shared = Arc<GameService>;

async fn create_game(State(svc): State<Shared>, body: Bytes) -> ServiceResult<impl IntoResponse> {
    let view = svc.create(parse_body(&body)?)?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(
    State(svc): State<Shared>,
    UrlPath(id): UrlPath<String>,
) -> ServiceResult<Json<SessionView>> {
    svc.get(&id).map(Json)
}

async fn get_eval(
    State(svc): State<Shared>,
    UrlPath(id): UrlPath<String>,
) -> ServiceResult<Json<Evaluation>> {
    svc.eval(&id).map(Json)
}

async fn get_moves(
    State(svc): State<Shared>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<PlayerQuery>,
) -> ServiceResult<Json<MovesView>> {
    let player = q.player.as_deref().map(str::parse::<Player>).transpose()?;
    svc.moves(&id, player).map(Json)
}

async fn post_move(
    State(svc): State<Shared>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ServiceResult<Json<MoveResult>> {
    // an unknown session is reported before a malformed body
    svc.session(&id)?;
    svc.play(&id, parse_body(&body)?).map(Json)
}

async fn post_engine_move(
    State(svc): State<Shared>,
    UrlPath(id): UrlPath<String>,
) -> ServiceResult<Json<MoveResult>> {
    svc.engine_move(&id).map(Json)
}

pub fn router(service: Arc<GameService>) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", get(get_moves))
        .route("/games/{id}/move", post(post_move))
        .route("/games/{id}/engine-move", post(post_engine_move))
        .route("/games/{id}/eval", get(get_eval))
        .with_state(service)
}

/// Serves the API on `addr` until interrupted.
pub async fn serve(addr: SocketAddr, journal: Option<PathBuf>) -> std::io::Result<()> {
    let service = match journal {
        Some(path) => {
            GameService::with_journal(path).map_err(|e| std::io::Error::other(e.to_string()))?
        }
        None => GameService::in_memory(),
    };
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(service)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

#[cfg(test)]
mod tests {
    use super::*;

    const ENDGAME: &str = "-(2,4) -(1,3) +(2,3) +(2,0)";

    fn create(svc: &GameService, bars: &str) -> SessionView {
        svc.create(CreateRequest {
            bars: Some(bars.into()),
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn create_reports_evaluation() {
        let svc = GameService::in_memory();
        let v = create(&svc, ENDGAME);
        assert_eq!(v.eval.value, Dyadic::new(1, 5));
        assert_eq!(v.eval.outcome, Outcome::L);
        let v = create(&svc, "");
        assert_eq!(v.eval.value, Dyadic::ZERO);
        assert_eq!(v.eval.outcome, Outcome::P);
        assert!(v.terminal);
        assert_eq!(v.winner, Some(Player::Right));
    }

    #[test]
    fn rooks_create_bars() {
        let svc = GameService::in_memory();
        let v = svc
            .create(CreateRequest {
                rooks: Some("B 2 3".into()),
                ..Default::default()
            })
            .unwrap();
        assert_eq!(v.bars, "+(2,3)");
        assert_eq!(v.eval.value, Dyadic::new(11, 4));
        let err = svc
            .create(CreateRequest {
                rooks: Some("B 9 3".into()),
                ..Default::default()
            })
            .unwrap_err();
        assert_eq!(err.status(), StatusCode::BAD_REQUEST);
        let both = svc.create(CreateRequest {
            bars: Some("+(1,1)".into()),
            rooks: Some("B 1 1".into()),
            ..Default::default()
        });
        assert_eq!(both.unwrap_err().status(), StatusCode::BAD_REQUEST);
    }

    #[test]
    fn moves_and_turns() {
        let svc = GameService::in_memory();
        let id = create(&svc, ENDGAME).id;
        assert_eq!(svc.moves(&id, Some(Player::Left)).unwrap().moves.len(), 10);
        let wrong = svc.play(
            &id,
            MoveRequest {
                player: Some(Player::Right),
                component: 0,
                axis: Axis::Vertical,
                keep: 1,
            },
        );
        assert_eq!(wrong.unwrap_err().status(), StatusCode::CONFLICT);
        let illegal = svc
            .play(
                &id,
                MoveRequest {
                    player: None,
                    component: 2,
                    axis: Axis::Vertical,
                    keep: 0,
                },
            )
            .unwrap_err();
        assert_eq!(illegal.status(), StatusCode::UNPROCESSABLE_ENTITY);
        assert!(illegal.to_string().contains("blue"), "{illegal}");
        let r = svc.engine_move(&id).unwrap();
        assert_eq!(r.played.component, 0);
        assert_eq!((r.played.axis, r.played.keep), (Axis::Vertical, 1));
        assert_eq!(r.resulting_value, Dyadic::ZERO);
        assert_eq!(r.session.to_move, Player::Right);
        assert_eq!(svc.get("nope").unwrap_err().status(), StatusCode::NOT_FOUND);
    }

    #[test]
    fn journal_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("journal.jsonl");
        let id = {
            let svc = GameService::with_journal(&path).unwrap();
            let id = create(&svc, ENDGAME).id;
            while !svc.get(&id).unwrap().terminal {
                svc.engine_move(&id).unwrap();
            }
            id
        };
        let before = std::fs::read_to_string(&path).unwrap();
        let svc = GameService::with_journal(&path).unwrap();
        let s = svc.snapshot(&id).unwrap();
        assert_eq!(s.replayed_state().unwrap(), s.state);
        assert!(svc.get(&id).unwrap().terminal);
        // replay does not rewrite the journal
        assert_eq!(std::fs::read_to_string(&path).unwrap(), before);
    }
}
