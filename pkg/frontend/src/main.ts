/** Browser entry point: load the endpoint config and mount the playground. */
import { loadEndpoint } from "./api.js";
import { createPlayground } from "./app.js";
import { CONTROL_RANGES } from "./controls.js";

async function boot(): Promise<void> {
  const rootEl = document.getElementById("playground");
  if (!rootEl) {
    throw new Error("missing #playground container");
  }
  const endpoint = await loadEndpoint();
  const playground = createPlayground(rootEl, { endpoint });

  const controls = document.createElement("form");
  controls.className = "controls";
  rootEl.prepend(controls);

  const state = {
    type: "sinusoidal" as const,
    amplitude: 0.5,
    carrier_freq: 155,
    envelope_freq: 4,
    duration: 1,
  };

  for (const name of ["amplitude", "carrier_freq", "envelope_freq", "duration"] as const) {
    const range = CONTROL_RANGES[name];
    const label = document.createElement("label");
    label.textContent = name.replace("_", " ");
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = String(range.min);
    slider.max = String(range.max);
    slider.step = String(range.step);
    slider.value = String(state[name]);
    if (name === "carrier_freq") {
      slider.classList.add("band-highlight"); // CSS shades the 80-230 Hz interval
    }
    slider.addEventListener("input", () => {
      state[name] = Number(slider.value);
      playground.edit({ ...state });
      void playground.refreshVisuals({ ...state });
    });
    label.appendChild(slider);
    controls.appendChild(label);
  }

  const compare = document.createElement("button");
  compare.type = "button";
  compare.textContent = "pin A/B";
  compare.addEventListener("click", () => playground.pinComparison());
  controls.appendChild(compare);

  const exportBtn = document.createElement("button");
  exportBtn.type = "button";
  exportBtn.textContent = "export session";
  exportBtn.addEventListener("click", () => {
    const blob = new Blob([playground.session.exportJson()], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "session.json";
    a.click();
    URL.revokeObjectURL(a.href);
  });
  controls.appendChild(exportBtn);

  playground.edit({ ...state });
  void playground.refreshVisuals({ ...state });
}

void boot();
