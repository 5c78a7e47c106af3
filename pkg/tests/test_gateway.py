import json

import pytest

from gamtalk.gateway import (
    Cassette,
    ChatParams,
    LiveTransport,
    ReplayMismatchError,
    ReplayTransport,
    ResponseCache,
    ScriptedTransport,
    TransportError,
    build_request_body,
    cache_lookup,
    complete_chat,
    request_digest,
    scripted_response_body,
)
from gamtalk.prompts import Message

PARAMS = ChatParams(model_name="test-model", temperature=0.0, max_retries=2)


def conversation(question="Is the graph monotone?"):
    return [Message("system", "You are a statistician."),
            Message("user", "Dataset description."),
            Message("assistant", "Thanks."),
            Message("user", question)]


class TestDigest:
    def test_stable_across_calls(self):
        assert request_digest(conversation(), PARAMS) \
            == request_digest(conversation(), PARAMS)

    def test_depends_on_content_model_temperature(self):
        base = request_digest(conversation(), PARAMS)
        assert request_digest(conversation("Other?"), PARAMS) != base
        assert request_digest(conversation(),
                              ChatParams(model_name="other")) != base
        assert request_digest(conversation(),
                              ChatParams(model_name="test-model",
                                         temperature=1.0)) != base

    def test_ignores_cosmetic_params(self):
        loose = ChatParams(model_name="test-model", max_retries=9,
                           request_timeout=5.0, max_output_tokens=4)
        assert request_digest(conversation(), loose) \
            == request_digest(conversation(), PARAMS)


class TestScripted:
    def test_pops_in_order(self):
        transport = ScriptedTransport(["monotone increasing", "second"])
        reply = complete_chat(conversation(), PARAMS, transport)
        assert reply == Message("assistant", "monotone increasing")
        assert complete_chat(conversation(), PARAMS, transport).content == "second"

    def test_empty_queue_errors(self):
        transport = ScriptedTransport([])
        with pytest.raises(TransportError, match="queue is empty"):
            complete_chat(conversation(), PARAMS, transport)

    def test_records_requests(self):
        transport = ScriptedTransport(["a"])
        complete_chat(conversation(), PARAMS, transport)
        assert transport.requests[0]["model"] == "test-model"
        assert transport.requests[0]["messages"][-1]["content"] \
            == "Is the graph monotone?"


class TestConversationChecks:
    def test_must_end_with_user(self):
        messages = conversation() + [Message("assistant", "done")]
        with pytest.raises(ValueError, match="end with a user"):
            complete_chat(messages, PARAMS, ScriptedTransport(["x"]))

    def test_illegal_alternation_rejected(self):
        bad = [Message("user", "no system first")]
        with pytest.raises(ValueError):
            complete_chat(bad, PARAMS, ScriptedTransport(["x"]))


class TestRecordReplay:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "run.jsonl"
        cassette = Cassette(path)
        body = build_request_body(conversation(), PARAMS)
        digest = request_digest(conversation(), PARAMS)
        cassette.append(digest, body, scripted_response_body("the answer"))

        replay = ReplayTransport(path)
        reply = complete_chat(conversation(), PARAMS, replay)
        assert reply.content == "the answer"

    def test_replay_is_strictly_ordered(self, tmp_path):
        path = tmp_path / "run.jsonl"
        cassette = Cassette(path)
        for question in ("q1", "q2"):
            msgs = conversation(question)
            cassette.append(request_digest(msgs, PARAMS),
                            build_request_body(msgs, PARAMS),
                            scripted_response_body(f"answer to {question}"))
        replay = ReplayTransport(path)
        # asking q2 first mismatches the first record
        with pytest.raises(ReplayMismatchError, match="digest mismatch"):
            complete_chat(conversation("q2"), PARAMS, replay)

    def test_exhausted_cassette(self, tmp_path):
        path = tmp_path / "run.jsonl"
        Cassette(path).append(request_digest(conversation(), PARAMS),
                              build_request_body(conversation(), PARAMS),
                              scripted_response_body("only one"))
        replay = ReplayTransport(path)
        complete_chat(conversation(), PARAMS, replay)
        # repeating an already-replayed request reuses its recorded response
        assert complete_chat(conversation(), PARAMS, replay).content == "only one"
        with pytest.raises(TransportError, match="exhausted"):
            complete_chat(conversation("fresh question"), PARAMS, replay)

    def test_recording_deduplicates_repeated_requests(self, tmp_path):
        path = tmp_path / "run.jsonl"
        cassette = Cassette(path)
        digest = request_digest(conversation(), PARAMS)
        body = build_request_body(conversation(), PARAMS)
        cassette.append(digest, body, scripted_response_body("a"))
        cassette.append(digest, body, scripted_response_body("b"))
        records = Cassette.read(path)
        assert len(records) == 1  # second append was a no-op

    def test_duplicate_digests_in_file_rejected(self, tmp_path):
        path = tmp_path / "dup.jsonl"
        line = json.dumps({"digest": "d", "request": {}, "response": {},
                           "timestamp": "t"})
        path.write_text(line + "\n" + line + "\n", encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate"):
            Cassette.read(path)

    def test_corrupt_line_reported(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"digest": "x"}\nnot json\n', encoding="utf-8")
        with pytest.raises(ValueError, match="line 2"):
            Cassette.read(path)


class FlakyPost:
    """Injectable HTTP stub: fails transiently n times, then succeeds."""

    def __init__(self, failures: int, status: int = 503, hard: bool = False):
        self.failures = failures
        self.status = status
        self.hard = hard
        self.calls = 0

    def __call__(self, url, headers, body, timeout):
        self.calls += 1
        if self.calls <= self.failures:
            if self.hard:
                raise ConnectionError("unreachable")
            return self.status, {"error": "busy"}
        return 200, scripted_response_body("live answer", body["model"])


class TestLiveTransport:
    def setup_method(self):
        self.sleeps: list[float] = []

    def transport(self, post, **kwargs):
        return LiveTransport("https://example.test/v1", record_path=None,
                             sleeper=self.sleeps.append, http_post=post, **kwargs)

    def test_missing_credential(self, monkeypatch):
        monkeypatch.delenv("GAMTALK_API_KEY", raising=False)
        transport = self.transport(FlakyPost(0))
        with pytest.raises(TransportError, match="credential missing"):
            complete_chat(conversation(), PARAMS, transport)

    def test_retries_then_succeeds(self, monkeypatch):
        monkeypatch.setenv("GAMTALK_API_KEY", "k")
        post = FlakyPost(2)
        reply = complete_chat(conversation(), PARAMS, self.transport(post))
        assert reply.content == "live answer"
        assert post.calls == 3
        assert self.sleeps == [1.0, 2.0]  # exponential backoff

    def test_unreachable_fails_after_exactly_attempts(self, monkeypatch):
        monkeypatch.setenv("GAMTALK_API_KEY", "k")
        post = FlakyPost(99, hard=True)
        with pytest.raises(TransportError) as err:
            complete_chat(conversation(), PARAMS, self.transport(post))
        assert post.calls == 3  # max_retries=2 -> 3 attempts
        assert err.value.attempts == 3

    def test_non_retriable_status_fails_fast(self, monkeypatch):
        monkeypatch.setenv("GAMTALK_API_KEY", "k")
        post = FlakyPost(99, status=401)
        with pytest.raises(TransportError, match="non-retriable"):
            complete_chat(conversation(), PARAMS, self.transport(post))
        assert post.calls == 1

    def test_backoff_total_bounded(self, monkeypatch):
        monkeypatch.setenv("GAMTALK_API_KEY", "k")
        post = FlakyPost(99, hard=True)
        transport = self.transport(post, backoff_ceiling=2.5)
        params = ChatParams(model_name="m", max_retries=8)
        with pytest.raises(TransportError):
            complete_chat(conversation(), params, transport)
        assert sum(self.sleeps) <= 2.5

    def test_records_cassette(self, tmp_path, monkeypatch):
        monkeypatch.setenv("GAMTALK_API_KEY", "k")
        path = tmp_path / "rec.jsonl"
        transport = LiveTransport("https://example.test/v1", record_path=path,
                                  sleeper=lambda s: None, http_post=FlakyPost(0))
        complete_chat(conversation(), PARAMS, transport)
        # the recording replays without any network
        replay = ReplayTransport(path)
        assert complete_chat(conversation(), PARAMS, replay).content == "live answer"

    def test_url_join(self):
        t = LiveTransport("https://example.test/v1")
        assert t.url == "https://example.test/v1/chat/completions"
        t2 = LiveTransport("https://example.test/v1/chat/completions")
        assert t2.url == "https://example.test/v1/chat/completions"


class TestCache:
    def test_hit_suppresses_transport(self, tmp_path):
        cache = ResponseCache(tmp_path / "cache")
        transport = ScriptedTransport(["first"])
        a = complete_chat(conversation(), PARAMS, transport, cache)
        b = complete_chat(conversation(), PARAMS, transport, cache)
        assert a == b == Message("assistant", "first")
        assert len(transport.requests) == 1  # second call never hit the transport
        assert len(transport.queue) == 0

    def test_temperature_changes_key(self, tmp_path):
        cache = ResponseCache(tmp_path / "cache")
        transport = ScriptedTransport(["cold", "hot"])
        cold = complete_chat(conversation(), PARAMS, transport, cache)
        hot = complete_chat(conversation(),
                            ChatParams(model_name="test-model", temperature=1.0),
                            transport, cache)
        assert (cold.content, hot.content) == ("cold", "hot")

    def test_deleted_cache_repopulates(self, tmp_path):
        cache_dir = tmp_path / "cache"
        cache = ResponseCache(cache_dir)
        transport = ScriptedTransport(["one", "two"])
        complete_chat(conversation(), PARAMS, transport, cache)
        for f in cache_dir.glob("*.json"):
            f.unlink()
        again = complete_chat(conversation(), PARAMS, transport, cache)
        assert again.content == "two"
        assert len(transport.requests) == 2

    def test_corrupt_entry_evicted(self, tmp_path):
        cache = ResponseCache(tmp_path / "cache")
        digest = request_digest(conversation(), PARAMS)
        cache.store(digest, "good")
        path = cache._path(digest)
        path.write_text("{broken", encoding="utf-8")
        assert cache.lookup(digest) is None
        assert not path.exists()  # evicted

    def test_cache_lookup_helper(self, tmp_path):
        cache = ResponseCache(tmp_path / "cache")
        assert cache_lookup(conversation(), PARAMS, cache) is None
        cache.store(request_digest(conversation(), PARAMS), "stored")
        assert cache_lookup(conversation(), PARAMS, cache) \
            == Message("assistant", "stored")


class TestResponseShape:
    def test_malformed_response_reported(self):
        class BadTransport:
            def send(self, request, digest, *, timeout=0, max_retries=0):
                return {"nonsense": True}

        with pytest.raises(TransportError, match="malformed"):
            complete_chat(conversation(), PARAMS, BadTransport())

    def test_wire_format_shape(self):
        body = build_request_body(conversation(), PARAMS)
        assert set(body) == {"model", "messages", "temperature", "max_tokens"}
        assert body["messages"][0] == {"role": "system",
                                       "content": "You are a statistician."}
        json.dumps(body)  # JSON-serializable
