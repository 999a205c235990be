import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

TESTDATA = Path(__file__).resolve().parent.parent / "testdata"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


class StubIngest:
    """Minimal stand-in for the core's ingest endpoint.

    Records every accepted body; can be stopped and restarted on the same
    port to simulate a core outage, and switched to 503 mode to simulate a
    core whose control loop is down.
    """

    def __init__(self, port: int = 0):
        self.bodies: list[bytes] = []
        self.unavailable = False
        self._lock = threading.Lock()
        self._port = port
        self._httpd = None
        self._thread = None

    def start(self):
        stub = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, *args):
                pass

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                body = self.rfile.read(length)
                if self.path != "/frame":
                    self.send_response(404)
                    self.send_header("Content-Length", "0")
                    self.end_headers()
                    return
                with stub._lock:
                    if stub.unavailable:
                        payload = json.dumps({"error": "loop down"}).encode()
                        self.send_response(503)
                        self.send_header("Content-Length", str(len(payload)))
                        self.end_headers()
                        self.wfile.write(payload)
                        return
                    stub.bodies.append(body)
                self.send_response(204)
                self.send_header("Content-Length", "0")
                self.end_headers()

        self._httpd = ThreadingHTTPServer(("127.0.0.1", self._port), Handler)
        self._port = self._httpd.server_address[1]
        self._thread = threading.Thread(target=self._httpd.serve_forever,
                                        daemon=True)
        self._thread.start()
        return self

    @property
    def endpoint(self) -> str:
        return f"127.0.0.1:{self._port}"

    def stop(self):
        if self._httpd is not None:
            self._httpd.shutdown()
            self._httpd.server_close()
            self._httpd = None


@pytest.fixture
def stub_ingest():
    stub = StubIngest().start()
    yield stub
    stub.stop()


@pytest.fixture(scope="session")
def test_video() -> Path:
    path = TESTDATA / "face.avi"
    assert path.exists(), "bundled test video missing; run testdata/make_test_video.py"
    return path


@pytest.fixture(scope="session")
def golden_record() -> dict:
    return json.loads((FIXTURES / "golden_frame.json").read_text())
