// DOM wiring for the rating page: overview image with highlighted regions,
// the three-crop row (candidate A, ground truth, candidate B), and the two
// choice buttons.  Candidates are only ever labelled A and B.

import { HttpTransport } from "./connector.js";
import { RaterSession } from "./session.js";
import { Side } from "./types.js";

const INSTRUCTIONS =
  "You will see pairs of processed images (A and B) next to the original " +
  "in the middle. Differences have been visually amplified. Pick the image " +
  "that reproduces the original more faithfully. There is always an " +
  "answer; please choose the closer one even when the difference is small.";

function workerId(): string {
  const params = new URLSearchParams(window.location.search);
  const fromUrl = params.get("worker");
  if (fromUrl) return fromUrl;
  let id = localStorage.getItem("rater-worker-id");
  if (!id) {
    id = `anon-${Math.random().toString(36).slice(2, 10)}`;
    localStorage.setItem("rater-worker-id", id);
  }
  return id;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const session = new RaterSession(new HttpTransport(), workerId());

function setButtonsEnabled(on: boolean): void {
  el<HTMLButtonElement>("choose-left").disabled = !on;
  el<HTMLButtonElement>("choose-right").disabled = !on;
}

function showPanel(name: "trial" | "complete" | "error"): void {
  for (const p of ["trial", "complete", "error"]) {
    el(`panel-${p}`).style.display = p === name ? "" : "none";
  }
}

function renderTrial(): void {
  const t = session.trial;
  if (!t) return;
  showPanel("trial");
  setButtonsEnabled(false);

  const overview = el<HTMLImageElement>("gt-full");
  overview.src = t.images.gt_full;

  const wire = (imgId: string, url: string, side: Side | null) => {
    const img = el<HTMLImageElement>(imgId);
    img.onload = () => {
      if (side) session.imageLoaded(side);
      if (session.gate.ready) setButtonsEnabled(true);
    };
    img.onerror = () => {
      session.imageFailed();
      showPanel("error");
    };
    img.src = url;
  };
  wire("crop-left", t.images.left, "left");
  wire("crop-gt", t.images.gt_crop, null);
  wire("crop-right", t.images.right, "right");

  if (session.progress) {
    el("progress").textContent =
      `${session.progress.worker_answered} answered - ` +
      `${session.progress.votes_recorded}/` +
      `${session.progress.votes_target_total} votes collected overall`;
  }
}

function renderState(): void {
  if (session.state === "trial") renderTrial();
  else if (session.state === "complete") showPanel("complete");
  else if (session.state === "error") showPanel("error");
}

async function choose(side: Side): Promise<void> {
  setButtonsEnabled(false);
  await session.choose(side);
  renderState();
}

function init(): void {
  if (!sessionStorage.getItem("instructions-shown")) {
    el("instructions").style.display = "";
    sessionStorage.setItem("instructions-shown", "1");
  }
  el("instructions-dismiss").addEventListener("click", () => {
    el("instructions").style.display = "none";
  });
  el("choose-left").addEventListener("click", () => void choose("left"));
  el("choose-right").addEventListener("click", () => void choose("right"));
  el("retry").addEventListener("click", async () => {
    await session.retry();
    renderState();
  });
  void session.loadNext().then(renderState);
}

document.addEventListener("DOMContentLoaded", init);
export { INSTRUCTIONS };
