/** Browser bootstrap: wires the console app to the page.
 *
 * Everything here is thin DOM glue — state transitions, rendering
 * markup, and request handling live in the testable modules this file
 * imports.
 */

import { ConsoleApp, type ConsoleState } from "./app.js";
import { ApiClient } from "./client.js";
import { renderAdtreePanel } from "./adtree.js";
import { renderSweepPanel } from "./sweep.js";
import { displayedSum } from "./weights.js";
import { escapeXml } from "./adtree.js";
import type { Strategy } from "./api.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`page is missing element #${id}`);
  }
  return node as T;
}

const banner = el<HTMLDivElement>("banner");
const bannerText = el<HTMLSpanElement>("banner-text");
const bannerDismiss = el<HTMLButtonElement>("banner-dismiss");
const slidersBox = el<HTMLDivElement>("sliders");
const sumIndicator = el<HTMLSpanElement>("sum-indicator");
const strategySelect = el<HTMLSelectElement>("strategy");
const graphFile = el<HTMLInputElement>("graph-file");
const graphText = el<HTMLTextAreaElement>("graph-text");
const graphLoad = el<HTMLButtonElement>("graph-load");
const rankTable = el<HTMLDivElement>("rank-table");
const treePanel = el<HTMLDivElement>("tree-panel");
const sweepPanel = el<HTMLDivElement>("sweep-panel");
const sweepFocus = el<HTMLSelectElement>("sweep-focus");
const sweepRuns = el<HTMLInputElement>("sweep-runs");
const sweepSeed = el<HTMLInputElement>("sweep-seed");
const sweepRun = el<HTMLButtonElement>("sweep-run");

const sliderInputs = new Map<string, HTMLInputElement>();
const sliderReadouts = new Map<string, HTMLSpanElement>();

function buildSliders(state: Readonly<ConsoleState>, app: ConsoleApp): void {
  if (state.weights === null || sliderInputs.size > 0) {
    return;
  }
  for (const criterion of state.weights.order) {
    const row = document.createElement("label");
    row.className = "slider-row";

    const name = document.createElement("span");
    name.className = "slider-name";
    name.textContent = criterion.replace(/_/g, " ");

    const input = document.createElement("input");
    input.type = "range";
    input.min = "0";
    input.max = "1";
    input.step = "0.01";
    input.dataset["criterion"] = criterion;
    input.addEventListener("input", () => {
      void app.onWeightChange(criterion, Number(input.value));
    });

    const readout = document.createElement("span");
    readout.className = "slider-value";

    row.append(name, input, readout);
    slidersBox.append(row);
    sliderInputs.set(criterion, input);
    sliderReadouts.set(criterion, readout);

    const option = document.createElement("option");
    option.value = criterion;
    option.textContent = criterion.replace(/_/g, " ");
    sweepFocus.append(option);
  }
}

function renderRankTable(state: Readonly<ConsoleState>): void {
  if (state.lastResponse === null) {
    rankTable.innerHTML =
      '<p class="placeholder">Load an attack-graph document to rank countermeasures.</p>';
    return;
  }
  const names = new Map<string, string>();
  for (const record of state.catalog?.countermeasures ?? []) {
    names.set(record.id, record.name);
  }
  const rows = state.lastResponse.recommendations
    .map((rec) => {
      const entries = rec.ranking.entries
        .map((entry) => {
          const mark = entry.id === rec.selected ? " class=\"selected-entry\"" : "";
          return `<li${mark}>${escapeXml(entry.id)} — ${entry.score.toFixed(4)}</li>`;
        })
        .join("");
      const selectedName = names.get(rec.selected) ?? "";
      return (
        `<tr><td>${escapeXml(rec.node_id)}</td>` +
        `<td><strong>${escapeXml(rec.selected)}</strong> ${escapeXml(selectedName)}</td>` +
        `<td><ol class="entry-list">${entries}</ol></td></tr>`
      );
    })
    .join("");
  rankTable.innerHTML =
    `<table><thead><tr><th>node</th><th>selected</th><th>ranking (${escapeXml(
      state.lastResponse.recommendations[0]?.ranking.strategy ?? "",
    )})</th></tr></thead><tbody>${rows}</tbody></table>`;
}

function render(state: Readonly<ConsoleState>, app: ConsoleApp): void {
  buildSliders(state, app);

  if (state.banner === null) {
    banner.hidden = true;
  } else {
    banner.hidden = false;
    bannerText.textContent = state.banner;
  }

  if (state.weights !== null) {
    for (const criterion of state.weights.order) {
      const value = state.weights.values[criterion] ?? 0;
      const input = sliderInputs.get(criterion);
      const readout = sliderReadouts.get(criterion);
      if (input !== undefined && document.activeElement !== input) {
        input.value = value.toFixed(2);
      }
      if (readout !== undefined) {
        readout.textContent = value.toFixed(2);
      }
    }
    sumIndicator.textContent = displayedSum(state.weights);
  }

  renderRankTable(state);
  treePanel.innerHTML =
    state.lastResponse === null
      ? '<p class="placeholder">The attack-defense tree appears here after analysis.</p>'
      : renderAdtreePanel(state.lastResponse.adtree);
  sweepPanel.innerHTML = renderSweepPanel(state.sweep);
}

const client = new ApiClient("");
const app: ConsoleApp = new ConsoleApp(client, (state) => render(state, app));

bannerDismiss.addEventListener("click", () => app.dismissBanner());

strategySelect.addEventListener("change", () => {
  void app.setStrategy(strategySelect.value as Strategy);
});

graphFile.addEventListener("change", () => {
  const file = graphFile.files?.[0];
  if (file === undefined) {
    return;
  }
  void file.text().then((text) => app.loadGraphText(text));
});

graphLoad.addEventListener("click", () => {
  void app.loadGraphText(graphText.value);
});

sweepRun.addEventListener("click", () => {
  void app.runSweep(
    sweepFocus.value,
    Number.parseInt(sweepRuns.value, 10),
    Number.parseInt(sweepSeed.value, 10),
  );
});

void app.start();
