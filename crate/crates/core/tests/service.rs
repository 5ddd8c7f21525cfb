mod common;

use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use common::{json_request, multipart_request, send, upload, write_scene};
use pixel_height::io;
use pixel_height::service::{router, AppState, ServiceConfig};

fn app() -> axum::Router {
    router(AppState::new(Duration::from_secs(600)), &ServiceConfig::default())
}

const HARD: &str = r#"{"light": {"x": 20, "y": 4, "H": 150}, "mode": "hard"}"#;

#[tokio::test]
async fn health() {
    let (status, body) = send(&app(), Request::get("/health").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"ok");
}

#[tokio::test]
async fn upload_and_render() {
    let app = app();
    let scene = write_scene();
    let id = upload(&app, &scene, true).await;
    let (status, png) = send(&app, json_request(&format!("/scenes/{id}/render"), HARD)).await;
    assert_eq!(status, StatusCode::OK);
    let shadow = io::decode_shadow_png(&png).unwrap();
    assert_eq!(shadow.dimensions(), (96, 80));
    assert!(shadow.coverage() > 0);
}

#[tokio::test]
async fn renders_are_repeatable() {
    let app = app();
    let id = upload(&app, &write_scene(), true).await;
    let uri = format!("/scenes/{id}/render");
    let soft = r#"{"light": {"x": 20, "y": 4, "H": 150}, "mode": "soft", "softness": 0.2, "samples": 16, "seed": 4}"#;
    let first = send(&app, json_request(&uri, soft)).await;
    send(&app, json_request(&uri, HARD)).await;
    let second = send(&app, json_request(&uri, soft)).await;
    assert_eq!(first.0, StatusCode::OK);
    assert_eq!(first, second);
}

#[tokio::test]
async fn concurrent_renders_on_one_scene() {
    let app = app();
    let id = upload(&app, &write_scene(), false).await;
    let uri = format!("/scenes/{id}/render");
    let tasks: Vec<_> = (0..4)
        .map(|_| {
            let (app, uri) = (app.clone(), uri.clone());
            tokio::spawn(async move { send(&app, json_request(&uri, HARD)).await })
        })
        .collect();
    let mut results = Vec::new();
    for t in tasks {
        results.push(t.await.unwrap());
    }
    assert!(results.iter().all(|r| r == &results[0] && r.0 == StatusCode::OK));
}

#[tokio::test]
async fn preview_caps_samples() {
    let app = app();
    let id = upload(&app, &write_scene(), false).await;
    let uri = format!("/scenes/{id}/render");
    let req = |samples: u32, preview: bool| {
        format!(
            r#"{{"light": {{"x": 20, "y": 4, "H": 150}}, "mode": "soft", "softness": 0.2, "samples": {samples}, "seed": 1, "preview": {preview}}}"#
        )
    };
    let capped = send(&app, json_request(&uri, &req(200, true))).await;
    let at_cap = send(&app, json_request(&uri, &req(32, false))).await;
    assert_eq!(capped.0, StatusCode::OK);
    assert_eq!(capped, at_cap);
}

#[tokio::test]
async fn reflection_and_composite_modes() {
    let app = app();
    let id = upload(&app, &write_scene(), true).await;
    let uri = format!("/scenes/{id}/render");
    let (status, png) = send(
        &app,
        json_request(&uri, r#"{"light": {"x": 0, "y": 0, "H": 1}, "mode": "reflection"}"#),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(io::decode_rgba(&png).unwrap().dimensions(), (96, 80));
    let body = r#"{"light": {"x": 20, "y": 4, "horizon": 70}, "composite": true,
                   "composite_params": {"shadow_opacity": 0.8, "shadow_color": [0.1, 0.0, 0.2]}}"#;
    let (status, png) = send(&app, json_request(&uri, body)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(io::decode_rgb(&png).unwrap().dimensions(), (96, 80));
}

#[tokio::test]
async fn upload_errors_are_400() {
    let app = app();
    let scene = write_scene();
    let cutout = std::fs::read(&scene.object).unwrap();
    let height = std::fs::read(&scene.height).unwrap();

    // Missing height part.
    let (status, _) = send(&app, multipart_request(&[("cutout", &cutout)])).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    // Cutout and height of different sizes.
    let small = io::encode_rgba_png(&image::RgbaImage::new(10, 10));
    let (status, _) = send(&app, multipart_request(&[("cutout", &small), ("height", &height)])).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    // Corrupt height map and an unknown part.
    let (status, _) = send(&app, multipart_request(&[("cutout", &cutout), ("height", b"PHM1junk")])).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(
        &app,
        multipart_request(&[("cutout", &cutout), ("height", &height), ("extra", b"x")]),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn unknown_scene_is_404() {
    let (status, _) = send(&app(), json_request("/scenes/nope/render", HARD)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn invalid_params_are_422() {
    let app = app();
    let id = upload(&app, &write_scene(), false).await;
    let uri = format!("/scenes/{id}/render");
    for body in [
        r#"{"light": {"x": 20, "y": 4, "H": 150}, "mode": "soft", "softness": -0.1}"#,
        r#"{"light": {"x": 20, "y": 4, "H": 0}}"#,
        r#"{"light": {"x": 20, "y": 4, "horizon": 4}}"#,
        r#"{"light": {"x": 20, "y": 4, "H": 150, "horizon": 70}}"#,
        r#"{"light": {"x": 20, "y": 4, "H": 150}, "samples": 0}"#,
        r#"{"light": {"x": 20, "y": 4, "H": 150}, "mode": "sharp"}"#,
        r#"{"light": {"x": 20, "y": 4, "H": 150}, "composite_params": {"shadow_opacity": 2}}"#,
    ] {
        let (status, _) = send(&app, json_request(&uri, body)).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    }
    let (status, _) = send(&app, json_request(&uri, "{not json")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn delete_forgets_the_scene() {
    let app = app();
    let id = upload(&app, &write_scene(), false).await;
    let del = || Request::delete(format!("/scenes/{id}")).body(Body::empty()).unwrap();
    assert_eq!(send(&app, del()).await.0, StatusCode::NO_CONTENT);
    assert_eq!(send(&app, del()).await.0, StatusCode::NOT_FOUND);
    let (status, _) = send(&app, json_request(&format!("/scenes/{id}/render"), HARD)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[test]
fn idle_scenes_are_evicted() {
    let state = AppState::new(Duration::from_secs(60));
    let scene = pixel_height::pipeline::Scene::new(
        image::RgbaImage::new(4, 4),
        pixel_height::heightmap::HeightMap::empty(4, 4),
        None,
        None,
    )
    .unwrap();
    state.insert(scene);
    let now = std::time::Instant::now();
    assert_eq!(state.evict_idle(now), 0);
    assert_eq!(state.evict_idle(now + Duration::from_secs(61)), 1);
    assert!(state.is_empty());
}
