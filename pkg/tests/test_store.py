from __future__ import annotations

import pytest

from kbdebug.store import (DATA_DIR_ENV, DEFAULT_DATA_DIR, SessionRecord,
                           SessionStore)


@pytest.fixture
def store(tmp_path):
    return SessionStore(tmp_path / "sessions")


class TestCreateLoadSave:
    def test_create_persists_the_snapshot(self, store):
        record = store.create({"status": "awaiting-answer"})
        assert record.created == record.updated
        loaded = store.load(record.session_id)
        assert loaded is not None
        assert loaded.snapshot == {"status": "awaiting-answer"}
        assert loaded.created == record.created

    def test_save_replaces_and_touches(self, store):
        record = store.create({"n": 1})
        saved = store.save(record.session_id, {"n": 2})
        assert saved.updated >= record.updated
        assert saved.created == record.created
        assert store.load(record.session_id).snapshot == {"n": 2}

    def test_save_unknown_id_raises(self, store):
        with pytest.raises(KeyError):
            store.save("deadbeef", {"n": 1})

    def test_load_unknown_id_returns_none(self, store):
        assert store.load("deadbeef") is None

    def test_ids_are_distinct_and_listed_sorted(self, store):
        ids = {store.create({}).session_id for _ in range(3)}
        assert len(ids) == 3
        assert store.list_ids() == sorted(ids)

    def test_record_round_trip(self):
        record = SessionRecord("abc", {"x": [1, 2]}, 1.0, 2.0)
        assert SessionRecord.from_dict(record.to_dict()) == record


class TestPathSafety:
    @pytest.mark.parametrize("bad", ["", "../escape", "a/b", "x.json", "a b"])
    def test_hostile_ids_rejected(self, store, bad):
        with pytest.raises(ValueError):
            store.load(bad)

    def test_no_temp_files_linger(self, store):
        record = store.create({"n": 1})
        store.save(record.session_id, {"n": 2})
        leftovers = [p.name for p in store.data_dir.iterdir()
                     if not p.name.endswith(".json")]
        assert leftovers == []


class TestDataDirSelection:
    def test_env_var_is_honored(self, tmp_path, monkeypatch):
        target = tmp_path / "from-env"
        monkeypatch.setenv(DATA_DIR_ENV, str(target))
        store = SessionStore()
        assert store.data_dir == target
        assert target.is_dir()

    def test_explicit_dir_beats_the_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv(DATA_DIR_ENV, str(tmp_path / "ignored"))
        chosen = tmp_path / "explicit"
        assert SessionStore(chosen).data_dir == chosen

    def test_default_dir(self, tmp_path, monkeypatch):
        monkeypatch.delenv(DATA_DIR_ENV, raising=False)
        monkeypatch.chdir(tmp_path)
        assert SessionStore().data_dir.name == DEFAULT_DATA_DIR


class TestLocks:
    def test_one_lock_per_session(self, store):
        a = store.lock("aaa")
        assert store.lock("aaa") is a
        assert store.lock("bbb") is not a
