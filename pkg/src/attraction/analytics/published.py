"""Reference figures measured on a proprietary 2011-2018 box-office panel.

They need the proprietary dataset and are kept only as the expected shape of
this pipeline's output on that data; nothing here is asserted against
synthetic results.
"""

# Average days between release decision and release, by total box office
# (millions of yuan).
LEAD_TIME_DAYS = {
    "[100, inf)": 97.61,
    "[10, 100)": 49.72,
    "[1, 10)": 32.19,
    "[0, 1)": 25.60,
}

# Best-response rate for each release shift, tolerance factor 1.1.
BEST_RESPONSE_RATES = {
    -4: 0.8624,
    -3: 0.8769,
    -2: 0.8918,
    -1: 0.9083,
    1: 0.8413,
    2: 0.8858,
    3: 0.8982,
    4: 0.8629,
}

# Qualitative readings of the decay curves.
FIRST_WEEK_SHARE_THRESHOLD = 0.70  # over half of films reach this share
SECOND_WEEK_RATIO_THRESHOLD = 0.40  # about 60% of films fall below this ratio

PANEL_MOVIES = 2818
ATTENDANCE_PANEL_MOVIES = 1703
ATTENDANCE_PANEL_RECORDS = 40654
ATTENDANCE_DAYS = 1311
ATTENDANCE_PERIODS = 264
