#![cfg(feature = "http")]

use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;

use lifestyle_core::ingest::{
    resolve_with, trace_to_daylog_with, AllocationFractions, GpsPoint, LatLon, NearbyClient,
    PoiResolver, Registration, StayPointParams,
};
use lifestyle_core::PerCategory;

/// Minimal HTTP/1.1 stub answering every request with `body`, recording
/// request lines.
fn stub_server(body: &'static str) -> (String, Arc<Mutex<Vec<String>>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let seen = Arc::new(Mutex::new(Vec::new()));
    let log = Arc::clone(&seen);
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { break };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request_line = String::new();
            reader.read_line(&mut request_line).unwrap();
            loop {
                let mut header = String::new();
                if reader.read_line(&mut header).unwrap() == 0 || header == "\r\n" {
                    break;
                }
            }
            log.lock().unwrap().push(request_line.trim().to_string());
            let (status, payload) = if request_line.starts_with("GET /nearby?") {
                ("200 OK", body)
            } else {
                ("404 Not Found", "{}")
            };
            write!(
                stream,
                "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{payload}",
                payload.len()
            )
            .unwrap();
        }
    });
    (format!("http://{addr}"), seen)
}

const RESULTS: &str = r#"{"results": [
    {"name": "Far Gym", "tag": "gym", "lat": 22.3010, "lon": 87.3000},
    {"name": "Near Cafe", "tag": "cafe", "lat": 22.3002, "lon": 87.3000},
    {"name": "Twin Cafe", "tag": "bakery", "lat": 22.3002, "lon": 87.3000}
]}"#;

#[test]
fn nearest_result_within_radius_wins() {
    let (url, seen) = stub_server(RESULTS);
    let client = NearbyClient::new(&url).unwrap();
    let here = LatLon::new(22.3, 87.3).unwrap();
    // cafe ~22 m away, gym ~111 m away; the twin keeps response order
    let tag = client.nearest_tag(here, 75.0).unwrap();
    assert_eq!(tag.unwrap().as_str(), "cafe");
    let requests = seen.lock().unwrap().clone();
    assert_eq!(requests.len(), 1);
    assert!(requests[0].starts_with("GET /nearby?lat=22.3&lon=87.3&radius=75 "));
}

#[test]
fn results_outside_radius_are_ignored() {
    let (url, _) = stub_server(RESULTS);
    let client = NearbyClient::new(url).unwrap();
    let here = LatLon::new(22.3, 87.3).unwrap();
    assert!(client.nearest_tag(here, 10.0).unwrap().is_none());
}

#[test]
fn registration_precedes_remote_lookup() {
    let (url, seen) = stub_server(RESULTS);
    let client = NearbyClient::new(url).unwrap();
    let home = LatLon::new(22.3, 87.3).unwrap();
    let reg = Registration {
        home,
        work: LatLon::new(22.4, 87.3).unwrap(),
    };
    let tag = resolve_with(&reg, &client, home, &StayPointParams::default()).unwrap();
    assert!(tag.is_home());
    assert!(seen.lock().unwrap().is_empty());
}

#[test]
fn trace_through_remote_resolver() {
    let (url, _) = stub_server(RESULTS);
    let client = NearbyClient::new(url).unwrap();
    let reg = Registration {
        home: LatLon::new(22.2, 87.3).unwrap(),
        work: LatLon::new(22.4, 87.3).unwrap(),
    };
    let t0 = 1_700_035_200; // 08:00 UTC
    let trace: Vec<GpsPoint> = (0..=60)
        .map(|m| GpsPoint::new(t0 + m * 60, 22.3, 87.3).unwrap())
        .collect();
    let log = trace_to_daylog_with(
        &trace,
        &reg,
        &client,
        &StayPointParams::default(),
        &AllocationFractions::default(),
        &PerCategory::default(),
    )
    .unwrap();
    assert_eq!(log.visits().len(), 1);
    assert_eq!(log.visits()[0].tag.as_str(), "cafe");
    assert_eq!(log.visits()[0].hours, 1.0);
}

#[test]
fn server_errors_surface() {
    let (url, _) = stub_server(RESULTS);
    let client = NearbyClient::new(format!("{url}/missing")).unwrap();
    let here = LatLon::new(22.3, 87.3).unwrap();
    assert!(client.nearest_tag(here, 75.0).is_err());
}
