__all__ = [
    "__title__",
    "__description__",
    "__uri__",
    "__version__",
    "__author__",
    "__email__",
    "__license__",
    "__copyright__",
]

__title__ = "railtriage"
__description__ = (
    "Deterministic triage of railway grievance tweets into typed, routed tasks."
)
__uri__ = "https://github.com/railtriage/railtriage"
__version__ = "0.4.2"
__author__ = "railtriage contributors"
__email__ = "maintainers@railtriage.dev"
__license__ = "MIT or Apache License, Version 2.0"
__copyright__ = "Copyright 2022 {}".format(__author__)
