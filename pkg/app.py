import streamlit as st
import pandas as pd

from gridmarket_lib.errors import ConfigError, GridMarketError
from gridmarket_lib.harness import PRESETS, parse_config, results_frame, run_cell
from gridmarket_lib.harness.runner import DEFAULT_REPORT_CATEGORIES
from gridmarket_lib.utils import DEFAULT_SEED

# --- Page Configuration ---
st.set_page_config(page_title="GridMarket Results Explorer", layout="wide")

# --- Session State Initialization ---
if "results_df" not in st.session_state: st.session_state.results_df = None
if "stats_df" not in st.session_state: st.session_state.stats_df = None
if "run_report" not in st.session_state: st.session_state.run_report = None
if "scenario_name" not in st.session_state: st.session_state.scenario_name = None

# --- Sidebar UI ---
st.sidebar.title("🛰️ GridMarket")
st.sidebar.markdown("---")
st.sidebar.subheader("Scenario")

source = st.sidebar.radio("Scenario source", ("Preset", "Config file"))
config = None
if source == "Preset":
    preset_name = st.sidebar.selectbox("Preset", options=["wwg"])
    deadline = st.sidebar.number_input("Deadline", min_value=1.0, value=3100.0, step=100.0)
    budget = st.sidebar.number_input("Budget (G$)", min_value=0.0, value=22000.0, step=1000.0)
    n_gridlets = st.sidebar.number_input("Gridlets", min_value=0, value=200, step=10)
    config = PRESETS[preset_name](deadline=deadline, budget=budget, n_gridlets=int(n_gridlets))
    scenario_name = f"{preset_name} (deadline {deadline:g}, budget {budget:g})"
else:
    uploaded_file = st.sidebar.file_uploader("Choose a .json scenario", type=["json"])
    scenario_name = uploaded_file.name if uploaded_file is not None else None
    if uploaded_file is not None:
        try:
            config = parse_config(uploaded_file.getvalue().decode("utf-8")).without_sweep()
        except ConfigError as e:
            st.sidebar.error(f"Config error: {e}")

seed = st.sidebar.number_input("Seed", min_value=0, value=DEFAULT_SEED, step=1)

if st.sidebar.button("Run scenario", disabled=config is None):
    config.seed = int(seed)
    with st.spinner(f"Simulating '{scenario_name}'..."):
        try:
            rows, report, sim = run_cell(config, report_categories=DEFAULT_REPORT_CATEGORIES)
            st.session_state.results_df = results_frame(rows)
            st.session_state.stats_df = sim.statistics_frame()
            st.session_state.run_report = report
            st.session_state.scenario_name = scenario_name
            st.sidebar.success("Run finished!")
        except GridMarketError as e:
            st.sidebar.error(f"Run failed: {e}")

# --- Main Panel ---
st.title("Results Explorer")

if st.session_state.results_df is None:
    st.info("Pick a scenario in the sidebar and run it to browse the results.")
else:
    report = st.session_state.run_report
    st.markdown(f"**Scenario:** {st.session_state.scenario_name}")
    col1, col2, col3 = st.columns(3)
    col1.metric("Final clock", f"{report.final_clock:.2f}")
    col2.metric("Events delivered", sum(report.events_by_entity.values()))
    col3.metric("Trace digest", report.trace_digest[:12])

    st.subheader("Per-user results")
    results_df = st.session_state.results_df
    st.dataframe(results_df, use_container_width=True)
    st.download_button("Download results CSV",
                       results_df.to_csv(index=False, float_format="%.12g", lineterminator="\n"),
                       file_name="results.csv", mime="text/csv")

    st.subheader("Recorded statistics")
    stats_df = st.session_state.stats_df
    category_filter = st.text_input("Filter categories (substring):")
    if category_filter:
        stats_df = stats_df[stats_df["category"].str.contains(category_filter, regex=False)]
    st.dataframe(stats_df, use_container_width=True, height=min(500, (len(stats_df) + 1) * 35 + 3))

    st.subheader("Events per entity")
    events_df = pd.DataFrame(sorted(report.events_by_entity.items()), columns=["entity", "events"])
    st.dataframe(events_df, use_container_width=True)
