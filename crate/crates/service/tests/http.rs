use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use smaatri::{fixtures, AcceptabilityReport, ProjectFile};
use smaatri_service::engine::{self, RunRequest, Selection, WhatIfResponse};
use smaatri_service::http::{router, AppState, RunHandle, RunStatus};

async fn call(app: &Router, method: &str, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    use tower::ServiceExt;
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, Body::from))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn with_case_study() -> (Router, Arc<AppState>, String) {
    let state = Arc::new(AppState::default());
    let app = router(Arc::clone(&state));
    let (status, body) = call(&app, "POST", "/projects", Some(fixtures::CASE_STUDY_JSON.to_string())).await;
    assert_eq!(status, StatusCode::CREATED);
    let id = body["project_id"].as_str().unwrap().to_string();
    (app, state, id)
}

async fn wait_for(app: &Router, run_id: &str) -> RunHandle {
    for _ in 0..600 {
        let (status, body) = call(app, "GET", &format!("/runs/{run_id}"), None).await;
        assert_eq!(status, StatusCode::OK);
        let handle: RunHandle = serde_json::from_value(body).unwrap();
        assert_eq!(handle.result.is_some(), handle.status == RunStatus::Done);
        if !matches!(handle.status, RunStatus::Queued | RunStatus::Running) {
            return handle;
        }
        tokio::time::sleep(Duration::from_millis(50)).await;
    }
    panic!("run {run_id} did not finish");
}

#[tokio::test]
async fn project_create_and_fetch() {
    let (app, _, id) = with_case_study().await;
    assert_eq!(id, "case-study");
    let (status, body) = call(&app, "GET", "/projects/case-study", None).await;
    assert_eq!(status, StatusCode::OK);
    let p: ProjectFile = serde_json::from_value(body).unwrap();
    assert_eq!(p, fixtures::case_study());
    assert_eq!(call(&app, "GET", "/projects/nope", None).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn invalid_project_is_400_with_report() {
    let state = Arc::new(AppState::default());
    let app = router(state);
    let mut p = fixtures::case_study();
    p.model.profiles.base.get_mut("g2_3").unwrap().reverse();
    let (status, body) = call(&app, "POST", "/projects", Some(serde_json::to_string(&p).unwrap())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "validation");
    assert!(!body["violations"].as_array().unwrap().is_empty());
    let (status, _) = call(&app, "POST", "/projects", Some("{ not json".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn unknown_run_is_404() {
    let (app, _, _) = with_case_study().await;
    assert_eq!(call(&app, "GET", "/runs/run-999", None).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn async_run_matches_direct_execution() {
    let (app, _, id) = with_case_study().await;
    let request = json!({ "selection": "group", "config": { "draws": 2000, "seed": 5 } });
    let (status, body) = call(&app, "POST", &format!("/projects/{id}/runs"), Some(request.to_string())).await;
    assert_eq!(status, StatusCode::ACCEPTED);
    let handle: RunHandle = serde_json::from_value(body).unwrap();
    let done = wait_for(&app, &handle.run_id).await;
    assert_eq!(done.status, RunStatus::Done);

    let direct = engine::execute(
        &fixtures::case_study(),
        &serde_json::from_value::<RunRequest>(request).unwrap(),
    )
    .unwrap();
    assert_eq!(done.result.unwrap(), direct);
}

#[tokio::test]
async fn bad_run_config_is_400() {
    let (app, _, id) = with_case_study().await;
    let bad = json!({ "config": { "lambda": { "lo": 0.9, "hi": 0.8 } } });
    assert_eq!(
        call(&app, "POST", &format!("/projects/{id}/runs"), Some(bad.to_string()))
            .await
            .0,
        StatusCode::BAD_REQUEST
    );
    let unknown_dm = json!({ "selection": { "dm": "DM9" } });
    assert_eq!(
        call(
            &app,
            "POST",
            &format!("/projects/{id}/runs"),
            Some(unknown_dm.to_string())
        )
        .await
        .0,
        StatusCode::BAD_REQUEST
    );
    assert_eq!(
        call(&app, "POST", "/projects/none/runs", Some("{}".into())).await.0,
        StatusCode::NOT_FOUND
    );
}

#[tokio::test]
async fn replacing_a_project_with_active_runs_is_409() {
    let (app, state, id) = with_case_study().await;
    let run_id = state.register_run(&id);
    let (status, _) = call(&app, "POST", "/projects", Some(fixtures::CASE_STUDY_JSON.to_string())).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(state.run(&run_id).unwrap().status, RunStatus::Queued);

    let other = Arc::new(AppState::default());
    let app2 = router(Arc::clone(&other));
    call(&app2, "POST", "/projects", Some(fixtures::CASE_STUDY_JSON.to_string())).await;
    let (status, _) = call(&app2, "POST", "/projects", Some(fixtures::CASE_STUDY_JSON.to_string())).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn whatif_with_empty_patch_equals_plain_run() {
    let (app, _, id) = with_case_study().await;
    let body = json!({ "selection": { "dm": "DM2" }, "config": { "draws": 1500, "seed": 3 } });
    let (status, resp) = call(&app, "POST", &format!("/projects/{id}/whatif"), Some(body.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let resp: WhatIfResponse = serde_json::from_value(resp).unwrap();
    let plain = engine::execute(
        &fixtures::case_study(),
        &RunRequest {
            selection: Selection::Dm("DM2".into()),
            config: serde_json::from_value(body["config"].clone()).unwrap(),
        },
    )
    .unwrap();
    assert_eq!(resp.reports, plain);
    assert_eq!(resp.breakpoints.len(), 1);
    assert_eq!(resp.breakpoints[0].alternatives.len(), 4);
}

#[tokio::test]
async fn whatif_caps_draws_and_never_mutates_the_project() {
    let (app, _, id) = with_case_study().await;
    let body = json!({
        "selection": { "dm": "DM1" },
        "config": { "draws": 50000 },
        "patch": { "veto": { "g4_6": 0.5 }, "rule": "pessimistic-standard", "lambda": { "lo": 0.6, "hi": 0.7 } }
    });
    let (status, resp) = call(&app, "POST", &format!("/projects/{id}/whatif"), Some(body.to_string())).await;
    assert_eq!(status, StatusCode::OK, "{resp}");
    let resp: WhatIfResponse = serde_json::from_value(resp).unwrap();
    assert_eq!(resp.reports[0].config.draws, engine::WHATIF_DRAW_CAP);
    assert_eq!(
        resp.reports[0].config.rule,
        smaatri::AssignmentRule::PessimisticStandard
    );

    let (_, stored) = call(&app, "GET", &format!("/projects/{id}"), None).await;
    assert_eq!(
        serde_json::from_value::<ProjectFile>(stored).unwrap(),
        fixtures::case_study()
    );
}

#[tokio::test]
async fn veto_on_unit_pilots_demotes_companies_without_them() {
    let (app, _, id) = with_case_study().await;
    let run =
        |patch: Value| json!({ "selection": { "dm": "DM1" }, "config": { "draws": 500 }, "patch": patch }).to_string();
    let (_, before) = call(&app, "POST", &format!("/projects/{id}/whatif"), Some(run(json!({})))).await;
    let (_, after) = call(
        &app,
        "POST",
        &format!("/projects/{id}/whatif"),
        Some(run(json!({ "veto": { "g4_6": 0.5 } }))),
    )
    .await;
    let before: WhatIfResponse = serde_json::from_value(before).unwrap();
    let after: WhatIfResponse = serde_json::from_value(after).unwrap();
    let mean_class = |r: &AcceptabilityReport, alt: &str| -> f64 {
        r.row(alt)
            .unwrap()
            .pi
            .iter()
            .enumerate()
            .map(|(k, p)| (k + 1) as f64 * p)
            .sum()
    };
    for alt in ["A", "B"] {
        // no unit pilot: the veto can only push these two towards riskier classes
        assert!(
            mean_class(&after.reports[0], alt) <= mean_class(&before.reports[0], alt),
            "{alt}"
        );
    }
    // Company C has the unit pilot, so its assignment is unaffected
    assert_eq!(after.reports[0].row("C"), before.reports[0].row("C"));
}

#[tokio::test]
async fn whatif_rejects_bad_patches() {
    let (app, _, id) = with_case_study().await;
    let bad = json!({ "patch": { "veto": { "nope": 1.0 } } });
    assert_eq!(
        call(&app, "POST", &format!("/projects/{id}/whatif"), Some(bad.to_string()))
            .await
            .0,
        StatusCode::BAD_REQUEST
    );
    let below_p = json!({ "patch": { "veto": { "g5_8": -0.5 } } });
    let (status, body) = call(
        &app,
        "POST",
        &format!("/projects/{id}/whatif"),
        Some(below_p.to_string()),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "validation");
}

#[tokio::test]
async fn simos_endpoint() {
    let state = Arc::new(AppState::default());
    let app = router(state);
    let (status, body) = call(
        &app,
        "POST",
        "/weights/simos",
        Some(fixtures::DM1_DECK_JSON.to_string()),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert!((body["total"].as_f64().unwrap() - 40.63).abs() < 0.01);
    let (status, _) = call(
        &app,
        "POST",
        "/weights/simos",
        Some(r#"{"ranks": [["a"], ["b"]], "white_cards": [0], "z": 0.5}"#.into()),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn project_directory_write_through() {
    let dir = tempfile::tempdir().unwrap();
    {
        let state = Arc::new(AppState::with_dir(dir.path()).unwrap());
        let app = router(state);
        call(&app, "POST", "/projects", Some(fixtures::CASE_STUDY_JSON.to_string())).await;
    }
    let reloaded = AppState::with_dir(dir.path()).unwrap();
    assert_eq!(*reloaded.project("case-study").unwrap(), fixtures::case_study());
}

#[tokio::test]
async fn cli_and_http_reports_match() {
    let (app, _, id) = with_case_study().await;
    let request = json!({ "selection": { "dm": "DM4" }, "config": { "draws": 1000, "seed": 11 } });
    let (_, body) = call(&app, "POST", &format!("/projects/{id}/runs"), Some(request.to_string())).await;
    let handle: RunHandle = serde_json::from_value(body).unwrap();
    let http_reports = wait_for(&app, &handle.run_id).await.result.unwrap();

    let case = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/case_study.json");
    let out = tokio::process::Command::new(env!("CARGO_BIN_EXE_smaatri"))
        .args([
            "run", case, "--dm", "DM4", "--draws", "1000", "--seed", "11", "--format", "json",
        ])
        .output()
        .await
        .unwrap();
    let cli_reports: Vec<AcceptabilityReport> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cli_reports, http_reports);
}
