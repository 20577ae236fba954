/**
 * DOM construction for the right-hand information pane. All content comes
 * from a PaneModel; interaction is reported through callbacks.
 */

import { PaneModel, RecommendationView, itemLabel } from "./viewmodel.js";
import { WeightVector } from "./state.js";
import { FACTOR_NAMES } from "./viewmodel.js";
import { FACTOR_LABELS } from "./schema.js";

export interface PanelCallbacks {
  onItemHover: (item: string | null) => void;
  onRefresh: () => void;
  onWeightChange: (index: number, value: number) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function recommendationRow(
  rec: RecommendationView,
  callbacks: PanelCallbacks,
): HTMLElement {
  const row = el("li", "rec-row");
  row.addEventListener("mouseenter", () => callbacks.onItemHover(rec.item));
  row.addEventListener("mouseleave", () => callbacks.onItemHover(null));

  const link = el("a", "rec-link", `${rec.rank}. ${itemLabel(rec.item)}`);
  link.href = rec.item;
  link.target = "_blank";
  row.appendChild(link);
  row.appendChild(el("span", "rec-rho", ` ρ(i)=${rec.rho.toFixed(2)}`));

  const whyButton = el("button", "why-toggle", "why?");
  const popup = el("div", "why-popup");
  popup.hidden = true;
  for (const entry of rec.why) {
    const line = el("div", "why-line");
    line.appendChild(el("span", "why-name", `${entry.label} ${entry.name}`));
    const detail =
      entry.position === null
        ? `weight ${entry.weight.toFixed(2)} (not in this list)`
        : `weight ${entry.weight.toFixed(2)}, list position ${entry.position}`;
    line.appendChild(el("span", "why-detail", detail));
    popup.appendChild(line);
  }
  whyButton.addEventListener("click", () => {
    popup.hidden = !popup.hidden;
  });
  row.appendChild(whyButton);
  row.appendChild(popup);
  return row;
}

export function buildPane(model: PaneModel, callbacks: PanelCallbacks): HTMLElement {
  const pane = el("div", "pane");

  const header = el("div", "pane-header");
  const title = el("a", "pane-user", `@${model.user}`);
  title.href = model.profileUrl;
  title.target = "_blank";
  header.appendChild(title);
  header.appendChild(
    el("span", "pane-rho", ` side ${model.side}, polarity ${model.rho.toFixed(3)}`),
  );
  pane.appendChild(header);

  pane.appendChild(el("h3", undefined, "Sampled retweets"));
  const tweets = el("ul", "tweet-list");
  if (model.tweets.length === 0) {
    tweets.appendChild(el("li", "muted", "no endorsements recorded"));
  }
  for (const tweet of model.tweets) {
    tweets.appendChild(
      el("li", undefined, `@${tweet.author} — ${tweet.tweetId} — ${itemLabel(tweet.item)}`),
    );
  }
  pane.appendChild(tweets);

  pane.appendChild(el("h3", undefined, "Contrarian recommendations"));
  const recs = el("ul", "rec-list");
  for (const rec of model.recommendations) {
    recs.appendChild(recommendationRow(rec, callbacks));
  }
  pane.appendChild(recs);
  if (model.shortPool) {
    pane.appendChild(el("div", "muted", "candidate pool smaller than requested"));
  }

  pane.appendChild(el("h3", undefined, "Random articles (baseline)"));
  const baseline = el("ul", "baseline-list");
  for (const entry of model.baseline) {
    const row = el("li", "baseline-row");
    row.addEventListener("mouseenter", () => callbacks.onItemHover(entry.item));
    row.addEventListener("mouseleave", () => callbacks.onItemHover(null));
    const link = el("a", undefined, itemLabel(entry.item));
    link.href = entry.item;
    link.target = "_blank";
    row.appendChild(link);
    baseline.appendChild(row);
  }
  pane.appendChild(baseline);

  const refresh = el("button", "refresh", "refresh samples");
  refresh.addEventListener("click", () => callbacks.onRefresh());
  pane.appendChild(refresh);

  return pane;
}

export function buildSliders(
  weights: WeightVector,
  callbacks: PanelCallbacks,
): HTMLElement {
  const box = el("div", "sliders");
  box.appendChild(el("h3", undefined, "Factor weights"));
  FACTOR_LABELS.forEach((label, i) => {
    const row = el("div", "slider-row");
    row.appendChild(el("label", undefined, `${label} ${FACTOR_NAMES[label]}`));
    const input = el("input");
    input.type = "range";
    input.min = "0";
    input.max = "1";
    input.step = "0.05";
    input.value = String(weights[i]);
    input.addEventListener("change", () =>
      callbacks.onWeightChange(i, Number(input.value)),
    );
    row.appendChild(input);
    box.appendChild(row);
  });
  return box;
}

export function errorBanner(message: string, onRetry?: () => void): HTMLElement {
  const banner = el("div", "error-banner", message);
  if (onRetry) {
    const retry = el("button", "retry", "retry");
    retry.addEventListener("click", onRetry);
    banner.appendChild(retry);
  }
  return banner;
}
