from __future__ import annotations

import pytest

from promise_ownership import AlarmRegistry, Runtime


class Outcome:
    def __init__(self, value, report, runtime, registry):
        self.value = value
        self.report = report
        self.runtime = runtime
        self.registry = registry

    @property
    def error(self):
        return self.report.error


def run_in_root(body, verify=True, timeout=10.0, **kwargs) -> Outcome:
    """Run ``body`` as a root task on a private registry; fail on hangs."""
    registry = AlarmRegistry()
    rt = Runtime(verify=verify, registry=registry, **kwargs)
    box = {}

    def main():
        box["value"] = body()

    report = rt.run_root(main, timeout=timeout)
    return Outcome(box.get("value"), report, rt, registry)


@pytest.fixture
def run():
    return run_in_root
