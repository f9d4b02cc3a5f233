"""Secondary acceptance: equivalence against the engine-side evaluators,
protocol fuzz, and supervised timeout behavior."""

import json
import random
import subprocess
import sys
import time

from heuforge.problems import BASELINES, evaluate_instance, generate_instances
from heuforge.problems.instances import instance_to_json
from heuforge.runtime import ExecutionRequest, HarnessSupervisor

HARNESS_CMD = [sys.executable, "-m", "heuforge_harness"]

SCALES = {
    "tsp": {"n": 8},
    "kp": {"n": 12, "capacity": 3.0},
    "bpp_online": {"n": 60, "capacity": 100},
}


def report(name, ok, detail):
    print(f"[ACCEPTANCE-SECONDARY] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def test_harness_equivalence_with_engine_evaluators():
    supervisor = HarnessSupervisor(HARNESS_CMD, memory_limit_bytes=None)
    mismatches = 0
    comparisons = 0
    for problem, scale in SCALES.items():
        instances = generate_instances(problem, scale, 50, 1234)
        payload = [instance_to_json(inst) for inst in instances]
        for policy in BASELINES[problem]:
            request = ExecutionRequest(
                id=f"eq-{problem}-{policy.name}",
                code=policy.source,
                entry=policy.entry,
                problem=problem,
                instances=payload,
                timeout_ms=60000,
            )
            result = supervisor.execute_batch(request)
            assert result.ok, result.error
            fn = policy.load()
            direct = [evaluate_instance(fn, problem, inst) for inst in instances]
            for a, b in zip(direct, result.objectives):
                comparisons += 1
                if float(a).is_integer() and float(b).is_integer():
                    if a != b:
                        mismatches += 1
                elif abs(a - b) > 1e-9:
                    mismatches += 1
    report(
        "Harness equivalence",
        mismatches == 0,
        f"{comparisons} objective comparisons across 3 problems x 3 policies, {mismatches} mismatches",
    )


def _fuzz_lines(count: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    nn = BASELINES["tsp"][0]
    tsp_instance = instance_to_json(generate_instances("tsp", {"n": 4}, 1, 5)[0])
    lines = []
    for i in range(count):
        roll = rng.random()
        if roll < 0.4:
            lines.append(
                json.dumps(
                    {
                        "id": f"ok-{i}",
                        "code": nn.source,
                        "entry": "select_next_node",
                        "problem": "tsp",
                        "instances": [tsp_instance],
                        "timeout_ms": 5000,
                    }
                )
            )
        elif roll < 0.55:
            lines.append("".join(rng.choice("{}[]\",:abc123 ") for _ in range(rng.randrange(1, 40))))
        elif roll < 0.7:
            lines.append(json.dumps({"id": f"miss-{i}"}))  # missing fields
        elif roll < 0.8:
            lines.append(json.dumps({"id": f"prob-{i}", "code": "x=1", "entry": "f", "problem": "chess", "instances": [], "timeout_ms": 10}))
        elif roll < 0.9:
            lines.append(json.dumps({"id": f"inst-{i}", "code": nn.source, "entry": "select_next_node", "problem": "tsp", "instances": [{"bad": True}], "timeout_ms": 1000}))
        else:
            lines.append(json.dumps({"id": f"code-{i}", "code": "def f(:", "entry": "f", "problem": "tsp", "instances": [tsp_instance], "timeout_ms": 1000}))
    return lines


def test_protocol_fuzz_one_response_per_request():
    lines = _fuzz_lines(1000, seed=99)
    proc = subprocess.run(
        HARNESS_CMD,
        input="\n".join(lines) + "\n",
        capture_output=True,
        text=True,
        timeout=300,
    )
    responses = [json.loads(line) for line in proc.stdout.splitlines()]
    ok = proc.returncode == 0 and len(responses) == len(lines)
    # ids of well-formed requests echo back in order
    expected_ids = [json.loads(l).get("id", "") if l.lstrip().startswith("{") else "" for l in _safe(lines)]
    echoed = all(r["id"] == e for r, e in zip(responses, expected_ids))
    report(
        "Protocol fuzz",
        ok and echoed,
        f"{len(lines)} mixed request lines -> {len(responses)} responses, exit {proc.returncode}",
    )


def _safe(lines):
    out = []
    for line in lines:
        try:
            json.loads(line)
            out.append(line)
        except json.JSONDecodeError:
            out.append("{}")
    return out


def test_infinite_loop_candidate_times_out_within_grace():
    supervisor = HarnessSupervisor(HARNESS_CMD, memory_limit_bytes=None)
    hang = "def select_next_node(c, d, u, m):\n    while True:\n        pass\n"
    timeout_ms = 1000
    request = ExecutionRequest(
        id="hang",
        code=hang,
        entry="select_next_node",
        problem="tsp",
        instances=[instance_to_json(generate_instances("tsp", {"n": 5}, 1, 2)[0])],
        timeout_ms=timeout_ms,
    )
    start = time.monotonic()
    result = supervisor.execute_batch(request)
    elapsed_ms = (time.monotonic() - start) * 1000.0
    report(
        "Timeout within grace",
        (not result.ok) and result.error.kind == "timeout" and elapsed_ms <= timeout_ms + 500,
        f"kind={result.error.kind}, elapsed {elapsed_ms:.0f}ms vs budget {timeout_ms}+500ms grace",
    )
