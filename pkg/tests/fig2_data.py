"""The five-level deforestation compression used across the test suite.

Level 0 is the original paragraph; each later level is the text chosen at
that round. Word counts shrink 60 -> 49 -> 38 -> 31 -> 29.
"""

FIG2_LEVELS = [
    (
        "Deforestation almost invariably speeds up the loss of nutrients into "
        "watercourses. It also, as previously explained, involves a release of "
        "carbon into the atmosphere. Forests thus play a clear and critical role "
        "in helping to protect the capacity of the land to support life by "
        "increasing the retention of nutrients and in helping to stabilize the "
        "atmosphere by storing carbon."
    ),
    (
        "Deforestation almost invariably speeds up the loss of nutrients. It "
        "also involves a release of carbon into the atmosphere. Forests thus "
        "play a clear and critical role in helping to protect the capacity of "
        "the land to support life by increasing nutrients and in helping to "
        "stabilize the atmosphere."
    ),
    (
        "Deforestation speeds up the loss of nutrients. It also involves a "
        "release of carbon. Forests thus play a clear and critical role in "
        "helping to protect the capacity of the land to support life and "
        "stabilize the atmosphere."
    ),
    (
        "Deforestation speeds up the loss of nutrients. It also involves a "
        "release of carbon. Forests play a clear and critical role in helping "
        "to protect the land and stabilize the atmosphere."
    ),
    (
        "Deforestation speeds up the loss of nutrients. It also involves a "
        "release of carbon. Forests play a critical role in helping to protect "
        "the land and stabilize the atmosphere."
    ),
]
