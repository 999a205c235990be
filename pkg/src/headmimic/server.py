"""HTTP surfaces: landmark ingest, robot command relay, live-mode wiring.

Ingest contract: POST /frame accepts one wire record per request (204 on
success, 400 with the schema violation, 503 while the control loop is not
running); GET /health reports counters. Frames land in a single-slot
latest-wins handoff: a newer frame replaces an unconsumed older one so the
loop always works on the present.

Robot contract (what a hardware relay would expose): POST /command with a
JSON robot command, GET /feedback with the sensed state. The simulator
server adds POST /step {"dt_ms": n} so a caller can drive simulated time in
lockstep; in realtime mode it ticks itself on a wall-clock timer instead.
"""

from __future__ import annotations

import json
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import IO

from .config import PipelineConfig
from .limits import LimitTable
from .pipeline import ControlLoop, write_log_record
from .robot import (CommandRejected, RobotFeedback, RobotHeadSim,
                    command_from_dict, command_to_dict)
from .wire import LandmarkFrame, SchemaError, parse_frame_record


class LatestWinsSlot:
    """Single-producer single-consumer handoff keeping only the newest frame."""

    def __init__(self):
        self._lock = threading.Condition()
        self._frame: LandmarkFrame | None = None
        self.dropped = 0

    def put(self, frame: LandmarkFrame) -> None:
        with self._lock:
            if self._frame is not None:
                self.dropped += 1
            self._frame = frame
            self._lock.notify()

    def take(self, timeout: float | None = None) -> LandmarkFrame | None:
        with self._lock:
            if self._frame is None:
                self._lock.wait(timeout)
            frame = self._frame
            self._frame = None
            return frame


@dataclass
class IngestStats:
    received: int = 0
    processed: int = 0
    loop_running: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)


def _split_listen(listen: str) -> tuple[str, int]:
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"listen address must be host:port, got {listen!r}")
    return host, int(port)


class _JsonHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # silence request logging
        pass

    def _read_body(self) -> bytes:
        length = int(self.headers.get("Content-Length", 0))
        return self.rfile.read(length) if length else b""

    def _respond(self, status: int, payload: dict | None = None) -> None:
        body = b"" if payload is None else json.dumps(payload).encode("utf-8")
        self.send_response(status)
        if body:
            self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if body:
            self.wfile.write(body)


class IngestServer:
    """Landmark ingest endpoint feeding a latest-wins slot."""

    def __init__(self, listen: str, slot: LatestWinsSlot, stats: IngestStats):
        self.slot = slot
        self.stats = stats
        host, port = _split_listen(listen)
        server = self

        class Handler(_JsonHandler):
            def do_POST(self):
                if self.path != "/frame":
                    self._respond(404, {"error": "unknown endpoint"})
                    return
                body = self._read_body()
                with server.stats.lock:
                    running = server.stats.loop_running
                if not running:
                    self._respond(503, {"error": "control loop is not running"})
                    return
                try:
                    frame = parse_frame_record(body)
                except SchemaError as exc:
                    self._respond(400, {"error": str(exc), "field": exc.field})
                    return
                server.slot.put(frame)
                with server.stats.lock:
                    server.stats.received += 1
                self._respond(204)

            def do_GET(self):
                if self.path != "/health":
                    self._respond(404, {"error": "unknown endpoint"})
                    return
                with server.stats.lock:
                    payload = {
                        "status": "ok",
                        "frames_received": server.stats.received,
                        "frames_processed": server.stats.processed,
                        "frames_dropped": server.slot.dropped,
                        "loop_running": server.stats.loop_running,
                    }
                self._respond(200, payload)

        self._httpd = ThreadingHTTPServer((host, port), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever,
                                        name="ingest-http", daemon=True)

    @property
    def address(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"{host}:{port}"

    def start(self) -> None:
        self._thread.start()

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()


class RobotSimServer:
    """Serves a RobotHeadSim over the hardware-relay HTTP contract."""

    def __init__(self, listen: str, sim: RobotHeadSim, realtime: bool = False):
        self.sim = sim
        self.realtime = realtime
        self._sim_lock = threading.Lock()
        self._stop_ticker = threading.Event()
        host, port = _split_listen(listen)
        server = self

        class Handler(_JsonHandler):
            def do_POST(self):
                body = self._read_body()
                if self.path == "/command":
                    try:
                        cmd = command_from_dict(json.loads(body or b"null"))
                        with server._sim_lock:
                            server.sim.apply_command(cmd)
                    except (json.JSONDecodeError, CommandRejected) as exc:
                        self._respond(400, {"error": str(exc)})
                        return
                    self._respond(200, {"status": "ok"})
                elif self.path == "/step":
                    if server.realtime:
                        self._respond(409, {"error": "server ticks on wall clock"})
                        return
                    try:
                        dt_ms = float(json.loads(body)["dt_ms"])
                        with server._sim_lock:
                            feedback = server.sim.step(dt_ms)
                    except (json.JSONDecodeError, KeyError, TypeError,
                            ValueError) as exc:
                        self._respond(400, {"error": str(exc)})
                        return
                    self._respond(200, feedback.to_dict())
                else:
                    self._respond(404, {"error": "unknown endpoint"})

            def do_GET(self):
                if self.path != "/feedback":
                    self._respond(404, {"error": "unknown endpoint"})
                    return
                with server._sim_lock:
                    feedback = server.sim.read_feedback()
                self._respond(200, feedback.to_dict())

        self._httpd = ThreadingHTTPServer((host, port), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever,
                                        name="robot-http", daemon=True)
        self._ticker = threading.Thread(target=self._tick_loop,
                                        name="robot-ticker", daemon=True)

    @property
    def address(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"{host}:{port}"

    def _tick_loop(self) -> None:
        tick_s = self.sim.params.tick_ms / 1000.0
        while not self._stop_ticker.wait(tick_s):
            with self._sim_lock:
                self.sim.step(self.sim.params.tick_ms)

    def start(self) -> None:
        self._thread.start()
        if self.realtime:
            self._ticker.start()

    def stop(self) -> None:
        self._stop_ticker.set()
        self._httpd.shutdown()
        self._httpd.server_close()


class HttpRobot:
    """Client side of the robot HTTP contract; drop-in for RobotHeadSim.

    step() first tries the lockstep /step extension; a relay that ticks on
    its own clock answers 409 and the client downgrades to polling
    /feedback after the command.
    """

    def __init__(self, endpoint: str, timeout_s: float = 2.0):
        self.base = endpoint if endpoint.startswith("http") else f"http://{endpoint}"
        self.timeout_s = timeout_s
        self._lockstep: bool | None = None

    def _post(self, path: str, payload: dict) -> tuple[int, dict]:
        req = urllib.request.Request(
            self.base + path,
            data=json.dumps(payload).encode("utf-8"),
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout_s) as resp:
                body = resp.read()
                return resp.status, json.loads(body) if body else {}
        except urllib.error.HTTPError as exc:
            body = exc.read()
            return exc.code, json.loads(body) if body else {}

    def apply_command(self, cmd) -> None:
        status, payload = self._post("/command", command_to_dict(cmd))
        if status != 200:
            raise CommandRejected(payload.get("error", f"HTTP {status}"))

    def step(self, dt_ms: float) -> RobotFeedback:
        if self._lockstep is not False:
            status, payload = self._post("/step", {"dt_ms": dt_ms})
            if status == 200:
                self._lockstep = True
                return _feedback_from_dict(payload)
            if status == 409:
                self._lockstep = False
            else:
                raise RuntimeError(f"robot /step failed: HTTP {status}: {payload}")
        return self.read_feedback()

    def read_feedback(self) -> RobotFeedback:
        with urllib.request.urlopen(self.base + "/feedback",
                                    timeout=self.timeout_s) as resp:
            return _feedback_from_dict(json.loads(resp.read()))


def _feedback_from_dict(d: dict) -> RobotFeedback:
    return RobotFeedback(
        t_ms=float(d["t_ms"]),
        sensed_yaw_deg=float(d["sensed_yaw_deg"]),
        sensed_pitch_deg=float(d["sensed_pitch_deg"]),
        eye_left_closed=bool(d["eye_left_closed"]),
        eye_right_closed=bool(d["eye_right_closed"]),
        speaking=bool(d["speaking"]),
    )


class LiveRunner:
    """Ingest server plus control loop consuming from the latest-wins slot."""

    def __init__(self, config: PipelineConfig, log_file: IO[str],
                 robot=None):
        self.config = config
        self.log_file = log_file
        if robot is None:
            if config.robot == "sim":
                table = LimitTable.from_json_file(config.limits_path)
                robot = RobotHeadSim(table, config.actuator, seed=config.seed)
            else:
                robot = HttpRobot(config.robot.removeprefix("http:"))
        self.loop = ControlLoop(config, robot)
        self.slot = LatestWinsSlot()
        self.stats = IngestStats()
        self.server = IngestServer(config.listen, self.slot, self.stats)
        self._stop = threading.Event()

    @property
    def address(self) -> str:
        return self.server.address

    def start(self) -> None:
        self.server.start()
        with self.stats.lock:
            self.stats.loop_running = True

    def serve_until_stopped(self, poll_timeout_s: float = 0.1) -> None:
        while not self._stop.is_set():
            frame = self.slot.take(timeout=poll_timeout_s)
            if frame is None:
                continue
            record = self.loop.process(frame)
            write_log_record(self.log_file, record)
            self.log_file.flush()
            with self.stats.lock:
                self.stats.processed += 1

    def stop(self) -> None:
        self._stop.set()
        with self.stats.lock:
            self.stats.loop_running = False
        self.server.stop()

    def drain(self, settle_s: float = 0.05) -> None:
        """Process anything still in the slot (used by tests and shutdown)."""
        deadline = time.monotonic() + settle_s
        while time.monotonic() < deadline:
            frame = self.slot.take(timeout=0.01)
            if frame is None:
                continue
            record = self.loop.process(frame)
            write_log_record(self.log_file, record)
            self.log_file.flush()
            with self.stats.lock:
                self.stats.processed += 1
