//! Starts the render service on a local port and drives it over plain
//! HTTP: upload a scene, render a hard and a soft shadow, delete it.
//!
//! `cargo run --example service_client [out_dir]`

use pixel_height::io;
use pixel_height::service::{router, AppState, ServiceConfig};
use pixel_height::synthetic::{cutout_for, standing_ellipse};
use std::io::{Read, Write};
use std::net::{SocketAddr, TcpStream};
use std::path::PathBuf;

/// Sends one HTTP/1.1 request and returns the status code and body.
fn request(addr: SocketAddr, head: &str, body: &[u8]) -> std::io::Result<(u16, Vec<u8>)> {
    let mut stream = TcpStream::connect(addr)?;
    let head = format!(
        "{head}\r\nHost: {addr}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    );
    stream.write_all(head.as_bytes())?;
    stream.write_all(body)?;
    let mut resp = Vec::new();
    stream.read_to_end(&mut resp)?;
    let split = resp.windows(4).position(|w| w == b"\r\n\r\n").unwrap_or(resp.len());
    let status = String::from_utf8_lossy(&resp[..split])
        .split_whitespace()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    Ok((status, resp[(split + 4).min(resp.len())..].to_vec()))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let rt = tokio::runtime::Runtime::new()?;
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))?;
    let addr = listener.local_addr()?;
    let app = router(AppState::new(ServiceConfig::default().ttl), &ServiceConfig::default());
    rt.spawn(async move { axum::serve(listener, app).await });
    println!("serving on http://{addr}");

    let obj = standing_ellipse(256, 256, 128.0, 140.0, 30.0, 80.0);
    let boundary = "xYzZy";
    let mut form = Vec::new();
    for (name, bytes) in [
        ("cutout", io::encode_rgba_png(&cutout_for(&obj))),
        ("height", io::encode_phm(&obj)),
    ] {
        form.extend(
            format!("--{boundary}\r\nContent-Disposition: form-data; name=\"{name}\"; filename=\"{name}\"\r\n\r\n")
                .as_bytes(),
        );
        form.extend(bytes);
        form.extend(b"\r\n");
    }
    form.extend(format!("--{boundary}--\r\n").as_bytes());
    let head = format!("POST /scenes HTTP/1.1\r\nContent-Type: multipart/form-data; boundary={boundary}");
    let (status, body) = request(addr, &head, &form)?;
    let id = serde_json::from_slice::<serde_json::Value>(&body)?["scene_id"]
        .as_str()
        .unwrap_or_default()
        .to_owned();
    println!("POST /scenes -> {status} {id}");

    let render = format!("POST /scenes/{id}/render HTTP/1.1\r\nContent-Type: application/json");
    for (name, json) in [
        (
            "service_hard.png",
            r#"{"light": {"x": 40, "y": 20, "H": 300}, "mode": "hard"}"#,
        ),
        (
            "service_soft.png",
            r#"{"light": {"x": 40, "y": 20, "H": 300}, "mode": "soft", "softness": 0.2, "preview": true}"#,
        ),
    ] {
        let (status, png) = request(addr, &render, json.as_bytes())?;
        std::fs::write(out.join(name), &png)?;
        println!("render {json} -> {status}, {} bytes", png.len());
    }
    let (status, body) = request(
        addr,
        &render,
        br#"{"light": {"x": 40, "y": 20, "H": 300}, "softness": -0.1}"#,
    )?;
    println!("negative softness -> {status} {}", String::from_utf8_lossy(&body));

    let (status, _) = request(addr, &format!("DELETE /scenes/{id} HTTP/1.1"), b"")?;
    println!("DELETE -> {status}");
    Ok(())
}
