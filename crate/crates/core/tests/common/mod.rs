#![allow(dead_code)]

use std::path::{Path, PathBuf};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use image::{Rgb, RgbImage};
use pixel_height::heightmap::HeightMap;
use pixel_height::io;
use pixel_height::shadow::ReceiverMap;
use pixel_height::synthetic::{cutout_for, standing_ellipse};
use tower::ServiceExt;

pub const BOUNDARY: &str = "pixelheightboundary";

/// Files of a small test scene on disk.
pub struct SceneFiles {
    pub dir: tempfile::TempDir,
    pub object: PathBuf,
    pub height: PathBuf,
    pub receiver: PathBuf,
    pub background: PathBuf,
}

impl SceneFiles {
    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

pub fn scene_height() -> HeightMap {
    standing_ellipse(96, 80, 40.0, 38.0, 9.0, 22.0)
}

/// A ramp rising toward the bottom-right corner.
pub fn scene_receiver() -> ReceiverMap {
    ReceiverMap::from_fn(96, 80, |x, y| {
        if x > 60 {
            (x - 60) as f32 * 0.5 + y as f32 * 0.1
        } else {
            0.0
        }
    })
    .unwrap()
}

pub fn scene_background() -> RgbImage {
    RgbImage::from_fn(96, 80, |x, y| Rgb([180 + (x % 50) as u8, 170, 150 + (y % 60) as u8]))
}

pub fn write_scene() -> SceneFiles {
    let dir = tempfile::tempdir().unwrap();
    let height = scene_height();
    let files = SceneFiles {
        object: dir.path().join("object.png"),
        height: dir.path().join("object.phm"),
        receiver: dir.path().join("receiver.phm"),
        background: dir.path().join("background.png"),
        dir,
    };
    io::write_png(&io::encode_rgba_png(&cutout_for(&height)), &files.object).unwrap();
    io::write_phm(&height, &files.height).unwrap();
    io::write_phm(
        &HeightMap::from_parts(96, 80, vec![true; 96 * 80], scene_receiver().values().to_vec()).unwrap(),
        &files.receiver,
    )
    .unwrap();
    io::write_png(&io::encode_rgb_png(&scene_background()), &files.background).unwrap();
    files
}

/// A multipart/form-data body with one file part per entry.
pub fn multipart(parts: &[(&str, &[u8])]) -> Vec<u8> {
    let mut body = Vec::new();
    for (name, bytes) in parts {
        body.extend_from_slice(
            format!(
                "--{BOUNDARY}\r\nContent-Disposition: form-data; name=\"{name}\"; filename=\"{name}\"\r\nContent-Type: application/octet-stream\r\n\r\n"
            )
            .as_bytes(),
        );
        body.extend_from_slice(bytes);
        body.extend_from_slice(b"\r\n");
    }
    body.extend_from_slice(format!("--{BOUNDARY}--\r\n").as_bytes());
    body
}

pub fn multipart_request(parts: &[(&str, &[u8])]) -> Request<Body> {
    Request::post("/scenes")
        .header("content-type", format!("multipart/form-data; boundary={BOUNDARY}"))
        .body(Body::from(multipart(parts)))
        .unwrap()
}

pub fn json_request(uri: &str, json: &str) -> Request<Body> {
    Request::post(uri)
        .header("content-type", "application/json")
        .body(Body::from(json.to_owned()))
        .unwrap()
}

/// Sends one request through a fresh clone of `app`.
pub async fn send(app: &axum::Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, body)
}

/// Uploads the files of `scene` (all four when `full`) and returns the id.
pub async fn upload(app: &axum::Router, scene: &SceneFiles, full: bool) -> String {
    let read = |p: &Path| std::fs::read(p).unwrap();
    let (o, h, r, b) = (
        read(&scene.object),
        read(&scene.height),
        read(&scene.receiver),
        read(&scene.background),
    );
    let mut parts: Vec<(&str, &[u8])> = vec![("cutout", &o), ("height", &h)];
    if full {
        parts.push(("receiver", &r));
        parts.push(("background", &b));
    }
    let (status, body) = send(app, multipart_request(&parts)).await;
    assert_eq!(status, StatusCode::CREATED, "{}", String::from_utf8_lossy(&body));
    let v: serde_json::Value = serde_json::from_slice(&body).unwrap();
    v["scene_id"].as_str().unwrap().to_owned()
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pixel-height")
}

pub fn run_cli(args: &[&str]) -> std::process::Output {
    std::process::Command::new(bin()).args(args).output().unwrap()
}
