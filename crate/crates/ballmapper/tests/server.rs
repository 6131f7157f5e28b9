use std::time::Duration;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use ballmapper::server::{router, ServerConfig};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const CSV: &str = "id,x,y,region,share,const\n\
                   a,0,0,North,10,7\n\
                   b,1,0,North,20,7\n\
                   c,2,0,South,30,7\n\
                   d,10,0,South,40,7\n\
                   e,10,1,West,50,7\n";

async fn send(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header(header::CONTENT_TYPE, "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn parse(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

async fn session(app: &Router) -> String {
    let (status, body) =
        send(app, Method::POST, "/sessions", Some(json!({"csv": CSV, "axes": ["x", "y"], "id_column": "id"}))).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    let v = parse(&body);
    assert_eq!(v["rows"], 5);
    assert_eq!(v["dropped"], 0);
    v["session_id"].as_str().unwrap().to_string()
}

fn error_code(body: &str) -> String {
    parse(body)["error"]["code"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn graph_builds_are_cached_and_canonical() {
    let app = router(ServerConfig::default());
    let id = session(&app).await;
    let uri = format!("/sessions/{id}/graphs");
    let (s1, g1) = send(&app, Method::POST, &uri, Some(json!({"epsilon": 1.0, "seed": 3}))).await;
    let (s2, g2) = send(&app, Method::POST, &uri, Some(json!({"epsilon": 1.0, "seed": 3}))).await;
    assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK));
    assert_eq!(g1, g2);
    let v = parse(&g1);
    assert_eq!(v["balls"].as_array().unwrap().len(), 3);
    assert_eq!(v["edges"], json!([[2, 3]]));
    assert!(g1.ends_with("}\n"));

    // Radius beyond the diameter gives a single ball.
    let (_, big) = send(&app, Method::POST, &uri, Some(json!({"epsilon": 1000.0}))).await;
    let v = parse(&big);
    assert_eq!(v["balls"].as_array().unwrap().len(), 1);
    assert_eq!(v["edges"], json!([]));
    assert_eq!(v["seed"], 0);
}

#[tokio::test]
async fn status_codes() {
    let app = router(ServerConfig::default());
    let id = session(&app).await;

    let (s, b) = send(&app, Method::POST, &format!("/sessions/{id}/graphs"), Some(json!({"epsilon": -1.0}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(error_code(&b), "invalid_parameter");

    let (s, b) = send(&app, Method::POST, &format!("/sessions/{id}/graphs"), Some(json!({"eps": 1.0}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(error_code(&b), "malformed_request");

    let req = Request::builder()
        .method(Method::POST)
        .uri(format!("/sessions/{id}/graphs"))
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from("{not json"))
        .unwrap();
    assert_eq!(app.clone().oneshot(req).await.unwrap().status(), StatusCode::BAD_REQUEST);

    let (s, b) = send(
        &app,
        Method::POST,
        "/sessions/00000000-0000-0000-0000-000000000000/graphs",
        Some(json!({"epsilon": 1.0})),
    )
    .await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(error_code(&b), "unknown_session");
    let (s, _) = send(&app, Method::GET, "/sessions/not-a-uuid/sweep?epsilons=1", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);

    let cmp = json!({"graph": {"epsilon": 1.0, "seed": 3}, "group_a": [1], "group_b": [42]});
    let (s, b) = send(&app, Method::POST, &format!("/sessions/{id}/comparisons"), Some(cmp)).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(error_code(&b), "unknown_ball");

    let (s, b) = send(&app, Method::GET, &format!("/sessions/{id}/sweep?epsilons=1,x"), None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST, "{b}");
    let (s, _) = send(&app, Method::GET, &format!("/sessions/{id}/sweep"), None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);

    let (s, b) = send(&app, Method::POST, "/sessions", Some(json!({"csv": CSV, "axes": ["nope"]}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(error_code(&b), "unknown_column");
}

#[tokio::test]
async fn sweep_comparison_and_layout() {
    let app = router(ServerConfig::default());
    let id = session(&app).await;
    let (s, b) = send(&app, Method::GET, &format!("/sessions/{id}/sweep?epsilons=0.5,1,100&seed=3"), None).await;
    assert_eq!(s, StatusCode::OK);
    let rows = parse(&b);
    assert_eq!(rows.as_array().unwrap().iter().map(|r| r["balls"].as_u64().unwrap()).collect::<Vec<_>>(), [5, 3, 1]);

    let cmp = json!({"graph": {"epsilon": 1.0, "seed": 3}, "group_a": [2, 3], "group_b": [2, 3]});
    let (s, b) = send(&app, Method::POST, &format!("/sessions/{id}/comparisons"), Some(cmp)).await;
    assert_eq!(s, StatusCode::OK);
    let report = parse(&b);
    assert!(report["rows"].as_array().unwrap().iter().all(|r| r["diff"] == 0.0 && r["std_diff"] == 0.0));
    assert_eq!(report["size_a"], 3);

    let (s, b) = send(&app, Method::GET, &format!("/sessions/{id}/layout?graph=1:3"), None).await;
    assert_eq!(s, StatusCode::OK);
    let layout = parse(&b);
    assert_eq!(layout.as_object().unwrap().len(), 3);
    let (_, again) = send(&app, Method::GET, &format!("/sessions/{id}/layout?graph=1:3"), None).await;
    assert_eq!(b, again);
}

#[tokio::test]
async fn colorings() {
    let app = router(ServerConfig::default());
    let id = session(&app).await;
    let uri = format!("/sessions/{id}/colorings");
    let graph = json!({"epsilon": 1.0, "seed": 3});

    let (s, b) =
        send(&app, Method::POST, &uri, Some(json!({"type": "attribute", "graph": graph, "column": "const"}))).await;
    assert_eq!(s, StatusCode::OK, "{b}");
    let c = parse(&b);
    assert_eq!(c["values"], json!({"1": 7.0, "2": 7.0, "3": 7.0}));
    assert_eq!((c["scale_min"].as_f64(), c["scale_max"].as_f64()), (Some(7.0), Some(7.0)));

    let (_, b) = send(
        &app,
        Method::POST,
        &uri,
        Some(json!({"type": "region", "graph": graph, "column": "region", "equals": "North"})),
    )
    .await;
    assert_eq!(parse(&b)["values"], json!({"1": 0.0, "2": 1.0, "3": 0.5}));

    let (s, b) =
        send(&app, Method::POST, &uri, Some(json!({"type": "distance_to_balls", "graph": graph, "targets": [1]})))
            .await;
    assert_eq!(s, StatusCode::OK, "{b}");
    assert_eq!(parse(&b)["label"], "distance to 1");

    let req = json!({"type": "residual_threshold", "graph": graph, "outcome": "share", "regressors": ["x"], "threshold": 2.0});
    let (s, b) = send(&app, Method::POST, &uri, Some(req)).await;
    assert_eq!(s, StatusCode::OK, "{b}");
    assert_eq!(parse(&b)["label"], "|residual| > 2");

    let (s, b) =
        send(&app, Method::POST, &uri, Some(json!({"type": "attribute", "graph": graph, "column": "region"}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(error_code(&b), "not_numeric");
    let (s, _) = send(&app, Method::POST, &uri, Some(json!({"type": "sparkle", "graph": graph}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) =
        send(&app, Method::POST, &uri, Some(json!({"type": "distance_to_balls", "graph": graph, "targets": [77]})))
            .await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn sessions_are_isolated_and_expire() {
    let app = router(ServerConfig { idle_timeout: Duration::from_millis(200), ..ServerConfig::default() });
    let a = session(&app).await;
    let (s, b) = send(
        &app,
        Method::POST,
        "/sessions",
        Some(json!({"csv": "k,v\nr1,1\nr2,2\n", "axes": ["v"], "id_column": "k"})),
    )
    .await;
    assert_eq!(s, StatusCode::CREATED);
    let other = parse(&b)["session_id"].as_str().unwrap().to_string();
    assert_ne!(a, other);
    let (_, g) = send(&app, Method::POST, &format!("/sessions/{other}/graphs"), Some(json!({"epsilon": 5.0}))).await;
    assert_eq!(parse(&g)["axes"], json!(["v"]));

    let (s, _) = send(&app, Method::DELETE, &format!("/sessions/{other}"), None).await;
    assert_eq!(s, StatusCode::NO_CONTENT);
    let (s, _) = send(&app, Method::POST, &format!("/sessions/{other}/graphs"), Some(json!({"epsilon": 5.0}))).await;
    assert_eq!(s, StatusCode::NOT_FOUND);

    tokio::time::sleep(Duration::from_millis(300)).await;
    let (s, _) = send(&app, Method::POST, &format!("/sessions/{a}/graphs"), Some(json!({"epsilon": 1.0}))).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn row_cap_and_body_limit() {
    let app = router(ServerConfig { max_rows: 3, body_limit: 4096, ..ServerConfig::default() });
    let (s, b) =
        send(&app, Method::POST, "/sessions", Some(json!({"csv": CSV, "axes": ["x"], "id_column": "id"}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(error_code(&b), "invalid_parameter");
    let big = "v\n".to_string() + &"1\n".repeat(4000);
    let (s, _) = send(&app, Method::POST, "/sessions", Some(json!({"csv": big, "axes": ["v"]}))).await;
    assert_eq!(s, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn cors_preflight_is_answered() {
    let app = router(ServerConfig::default());
    let req = Request::builder()
        .method(Method::OPTIONS)
        .uri("/sessions")
        .header(header::ORIGIN, "http://localhost:5173")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert!(resp.status().is_success());
    assert_eq!(resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");
}

#[test]
fn openapi_document_lists_every_route() {
    let doc = include_str!("../docs/openapi.yaml");
    for path in ["/sessions:", "/sessions/{id}:", "/graphs:", "/sweep:", "/colorings:", "/comparisons:", "/layout:"] {
        assert!(doc.contains(path), "{path}");
    }
    for kind in ["attribute", "region", "residual_threshold", "distance_to_balls"] {
        assert!(doc.contains(&format!("enum: [{kind}]")), "{kind}");
    }
}
