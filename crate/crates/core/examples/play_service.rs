//! Drives the HTTP API in-process: creates a game with the human as Right,
//! lets the engine answer each human move, and prints the exchange.

use std::sync::Arc;

use axum::body::Body;
use axum::http::Request;
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use partisan_chocolate::service::{router, GameService};

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (u16, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |v| Body::from(v.to_string())))
        .expect("valid request");
    let resp = app.clone().oneshot(req).await.expect("infallible");
    let status = resp.status().as_u16();
    let bytes = resp.into_body().collect().await.expect("body").to_bytes();
    (
        status,
        serde_json::from_slice(&bytes).unwrap_or(Value::Null),
    )
}

#[tokio::main]
async fn main() {
    let app = router(Arc::new(GameService::in_memory()));
    let (_, game) = call(
        &app,
        "POST",
        "/games",
        Some(json!({ "bars": "-(2,4) -(1,3) +(2,3) +(2,0)", "human": "R", "first": "L" })),
    )
    .await;
    let id = game["id"].as_str().expect("id").to_string();
    println!("created {id}: {} = {}", game["bars"], game["eval"]["value"]);

    loop {
        let (status, reply) = call(&app, "POST", &format!("/games/{id}/engine-move"), None).await;
        if status != 200 {
            println!("engine: {}", reply["error"]);
            break;
        }
        let p = &reply["played"];
        println!(
            "engine (L): component {} {} keep {} -> {}",
            p["component"], p["axis"], p["keep"], reply["resulting_value"]
        );
        if reply["session"]["terminal"] == true {
            println!("winner: {}", reply["session"]["winner"]);
            break;
        }

        // the "human" takes the move that is best for Right by the listed values
        let (_, moves) = call(&app, "GET", &format!("/games/{id}/moves?player=R"), None).await;
        let pick = moves["moves"]
            .as_array()
            .expect("moves")
            .iter()
            .min_by(|a, b| {
                let va = a["approx"].as_f64().unwrap_or(0.0);
                let vb = b["approx"].as_f64().unwrap_or(0.0);
                va.total_cmp(&vb)
            })
            .cloned()
            .expect("not terminal, so Right has a move");
        let body = json!({ "player": "R", "component": pick["component"], "axis": pick["axis"], "keep": pick["keep"] });
        let (_, reply) = call(&app, "POST", &format!("/games/{id}/move"), Some(body)).await;
        println!(
            "human  (R): component {} {} keep {} -> {}",
            pick["component"], pick["axis"], pick["keep"], reply["resulting_value"]
        );
        if reply["session"]["terminal"] == true {
            println!("winner: {}", reply["session"]["winner"]);
            break;
        }
    }
}
