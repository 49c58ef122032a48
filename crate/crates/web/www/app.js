import init, { derive_metrics, project_and_compare } from "./pkg/wattrace_web.js";

const DEFAULT_SET = {
  node_count: 3,
  reference: { label: "reference", trials: 50, mean_power_w: 2.648, min_trial_w: 2.494, max_trial_w: 2.914, stddev_w: 0.107, stderr_w: 0.015 },
  resting: { label: "resting", trials: 50, mean_power_w: 2.745, min_trial_w: 2.587, max_trial_w: 3.140, stddev_w: 0.146, stderr_w: 0.021 },
  loaded: {
    "50": { label: "50mps", trials: 50, mean_power_w: 3.761, min_trial_w: 3.279, max_trial_w: 4.312, stddev_w: 0.250, stderr_w: 0.035 },
    "100": { label: "100mps", trials: 50, mean_power_w: 4.080, min_trial_w: 3.796, max_trial_w: 4.549, stddev_w: 0.178, stderr_w: 0.025 },
    "200": { label: "200mps", trials: 25, mean_power_w: 4.268, min_trial_w: 4.101, max_trial_w: 4.445, stddev_w: 0.070, stderr_w: 0.014 },
  },
};

const DEFAULT_FLEET = {
  classes: [
    {
      name: "raspberry-pi-4b",
      pue: 1.59,
      p_base_w: 2.680131,
      node_count: 450,
      curve: [
        { rate_mps: 50.0, energy_j: 0.00678 },
        { rate_mps: 100.0, energy_j: 0.00445 },
        { rate_mps: 200.0, energy_j: 0.00254 },
      ],
    },
  ],
};

function showError(el, err) {
  el.textContent = String(err);
  el.classList.add("error");
}

function showResult(el, text) {
  el.textContent = text;
  el.classList.remove("error");
}

function drawCurve(canvas, points) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (points.length === 0) return;

  const pad = 40;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const xMax = Math.max(...points.map((p) => p.rate_mps));
  const yMax = Math.max(...points.map((p) => p.energy_j * 1000));

  const px = (r) => pad + (r / xMax) * w;
  const py = (mj) => pad + h - (mj / yMax) * h;

  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, pad + h);
  ctx.lineTo(pad + w, pad + h);
  ctx.stroke();

  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText("mJ / message", 4, pad - 8);
  ctx.fillText("mps", pad + w - 16, pad + h + 24);

  ctx.strokeStyle = "#1565c0";
  ctx.beginPath();
  points.forEach((p, i) => {
    const x = px(p.rate_mps);
    const y = py(p.energy_j * 1000);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();

  ctx.fillStyle = "#1565c0";
  for (const p of points) {
    const x = px(p.rate_mps);
    const y = py(p.energy_j * 1000);
    ctx.beginPath();
    ctx.arc(x, y, 3, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillText(`${(p.energy_j * 1000).toFixed(2)}`, x + 6, y - 6);
  }
}

async function main() {
  await init();

  const scenarioInput = document.getElementById("scenario-input");
  const fleetInput = document.getElementById("fleet-input");
  scenarioInput.value = JSON.stringify(DEFAULT_SET, null, 2);
  fleetInput.value = JSON.stringify(DEFAULT_FLEET, null, 2);

  const metricsOutput = document.getElementById("metrics-output");
  const projectionOutput = document.getElementById("projection-output");
  const curveCanvas = document.getElementById("curve-canvas");

  document.getElementById("derive-btn").addEventListener("click", () => {
    try {
      const out = derive_metrics(scenarioInput.value);
      showResult(metricsOutput, out);
      drawCurve(curveCanvas, JSON.parse(out).curve);
    } catch (err) {
      showError(metricsOutput, err);
    }
  });

  const rateSlider = document.getElementById("rate-slider");
  const nodesSlider = document.getElementById("nodes-slider");
  const rateLabel = document.getElementById("rate-label");
  const nodesLabel = document.getElementById("nodes-label");
  rateSlider.addEventListener("input", () => (rateLabel.textContent = rateSlider.value));
  nodesSlider.addEventListener("input", () => (nodesLabel.textContent = nodesSlider.value));

  document.getElementById("project-btn").addEventListener("click", () => {
    try {
      const fleet = JSON.parse(fleetInput.value);
      for (const cls of fleet.classes) cls.node_count = Number(nodesSlider.value);
      const out = project_and_compare(JSON.stringify(fleet), Number(rateSlider.value), 365);
      showResult(projectionOutput, out);
    } catch (err) {
      showError(projectionOutput, err);
    }
  });
}

main();
