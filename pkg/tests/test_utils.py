import logging

from railtriage.utils import combined_version, content_version, data_path, get_logger, set_debug


def test_set_debug():
    logger = logging.getLogger("railtriage")
    set_debug(True)
    assert logger.level == logging.DEBUG
    assert len(logger.handlers) == 1
    set_debug(True)
    assert len(logger.handlers) == 1
    set_debug(False)
    assert logger.level == logging.WARNING
    assert logger.handlers == []


def test_get_logger():
    assert get_logger("railtriage.test").name == "railtriage.test"


def test_content_version():
    assert content_version("abc") == content_version(b"abc")
    assert len(content_version("abc")) == 16
    assert content_version("abc") != content_version("abd")


def test_combined_version_is_order_sensitive():
    assert combined_version(["a", "b"]) != combined_version(["b", "a"])
    assert combined_version(["ab", ""]) != combined_version(["a", "b"])


def test_data_path():
    assert data_path("stations.tsv").is_file()
    assert data_path("lexicon").is_dir()
