import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.managers.mode_manager import BASELINE, WITH_FRAMEWORK, ModeManager
from src.sim.clock import INTERNAL, TIMELINE, EventScheduler, SimulationClock


def test_clock_never_moves_back():
    clock = SimulationClock(5)
    assert clock.advance_to(10) == 10
    with pytest.raises(ValueError):
        clock.advance_to(9)


def test_timeline_runs_before_internal_work_in_the_same_minute():
    scheduler = EventScheduler()
    scheduler.schedule(30, "wakeup", INTERNAL)
    scheduler.schedule(30, "joint-event", TIMELINE)
    scheduler.schedule(15, "green-phase")
    assert [scheduler.pop_next()[2] for _ in range(3)] == ["green-phase", "joint-event", "wakeup"]
    assert scheduler.now == 30
    assert scheduler.pop_next() is None


def test_wakeups_deduplicated_per_minute():
    scheduler = EventScheduler()
    assert scheduler.schedule_wakeup(105, "wakeup")
    assert not scheduler.schedule_wakeup(105, "wakeup")
    assert scheduler.peek_next_time() == 105


@given(st.lists(st.tuples(st.integers(0, 500), st.sampled_from([TIMELINE, INTERNAL])), max_size=40))
def test_pop_order_is_time_priority_submission(items):
    scheduler = EventScheduler()
    for seq, (time, priority) in enumerate(items):
        scheduler.schedule(time, seq, priority)
    popped = []
    while scheduler.has_pending():
        popped.append(scheduler.pop_next()[2])
    assert popped == sorted(range(len(items)), key=lambda s: (items[s][0], items[s][1], s))


def test_mode_manager():
    modes = ModeManager(BASELINE)
    assert not modes.governance_enabled
    modes.switch_mode(WITH_FRAMEWORK)
    assert modes.get_current_mode() == WITH_FRAMEWORK and modes.governance_enabled
    with pytest.raises(ValueError):
        modes.switch_mode("Chaos")
