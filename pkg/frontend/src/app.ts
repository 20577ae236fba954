/**
 * Explorer bootstrap: topic list -> graph canvas -> user pane, with weight
 * sliders driving what-if re-ranking through the service.
 */

import { ApiClient, HttpApiClient } from "./api.js";
import { GraphView } from "./graphview.js";
import { buildPane, buildSliders, errorBanner } from "./panel.js";
import { GraphNode, UserDetail } from "./schema.js";
import { RequestSequencer, ViewState, initialState, selectUser, setWeight } from "./state.js";
import { buildPaneModel, sharerHighlight } from "./viewmodel.js";

export class ExplorerApp {
  state: ViewState = initialState();
  private detail: UserDetail | null = null;
  private sequencer = new RequestSequencer();
  private view: GraphView;

  constructor(
    private api: ApiClient,
    private root: {
      canvas: HTMLCanvasElement;
      pane: HTMLElement;
      sliders: HTMLElement;
      topicSelect: HTMLSelectElement;
      info: HTMLElement;
      tooltip: HTMLElement;
      banner: HTMLElement;
    },
  ) {
    this.view = new GraphView(root.canvas, {
      onHover: (node) => this.showTooltip(node),
      onSelect: (node) => void this.onNodeClick(node.user),
      onBackground: () => this.clearPane(),
    });
  }

  async start(): Promise<void> {
    try {
      const topics = await this.api.topics();
      this.root.topicSelect.innerHTML = "";
      for (const topic of topics) {
        const option = document.createElement("option");
        option.value = topic.id;
        option.textContent = `${topic.name} (${topic.vertices} users, ${topic.side_x}/${topic.side_y})`;
        this.root.topicSelect.appendChild(option);
      }
      this.root.topicSelect.addEventListener("change", () =>
        void this.loadTopic(this.root.topicSelect.value),
      );
      if (topics.length > 0) {
        await this.loadTopic(topics[0].id);
      } else {
        this.showError("no topics loaded on the server");
      }
    } catch (err) {
      this.showError(`failed to load topics: ${(err as Error).message}`, () =>
        void this.start(),
      );
    }
  }

  async loadTopic(topicId: string): Promise<void> {
    this.clearError();
    try {
      const payload = await this.api.graph(topicId);
      this.state = { ...initialState(), topicId };
      this.view.setGraph(payload);
      this.renderSliders();
      this.clearPane();
      this.root.info.textContent = payload.description || payload.name;
    } catch (err) {
      this.showError(`failed to load topic: ${(err as Error).message}`, () =>
        void this.loadTopic(topicId),
      );
    }
  }

  async onNodeClick(user: string): Promise<void> {
    this.state = selectUser(this.state, user);
    this.view.setSelected(user);
    await this.fetchDetail();
  }

  async onWeightChange(index: number, value: number): Promise<void> {
    this.state = { ...this.state, weights: setWeight(this.state.weights, index, value) };
    this.renderSliders();
    if (this.state.selectedUser) {
      await this.fetchDetail();
    }
  }

  /** Fetch the pane payload; stale responses are discarded by token. */
  async fetchDetail(): Promise<void> {
    const { topicId, selectedUser, weights, sampleSeed } = this.state;
    if (!topicId || !selectedUser) return;
    const token = this.sequencer.begin();
    try {
      const detail = await this.api.userDetail(topicId, selectedUser, {
        weights,
        seed: sampleSeed,
      });
      if (!this.sequencer.shouldApply(token)) {
        return;
      }
      this.detail = detail;
      this.renderPane();
    } catch (err) {
      if (!this.sequencer.shouldApply(token)) return;
      this.showError(`failed to load user: ${(err as Error).message}`, () =>
        void this.fetchDetail(),
      );
    }
  }

  onItemHover(item: string | null): void {
    this.state = { ...this.state, hoverItem: item };
    if (item && this.detail) {
      this.view.setHighlight(sharerHighlight(this.detail, item));
    } else {
      this.view.setHighlight(null);
    }
  }

  private renderPane(): void {
    if (!this.detail) return;
    const model = buildPaneModel(this.detail);
    const pane = buildPane(model, {
      onItemHover: (item) => this.onItemHover(item),
      onRefresh: () => void this.onNodeClick(model.user),
      onWeightChange: (i, v) => void this.onWeightChange(i, v),
    });
    this.root.pane.replaceChildren(pane);
  }

  private renderSliders(): void {
    const sliders = buildSliders(this.state.weights, {
      onItemHover: (item) => this.onItemHover(item),
      onRefresh: () => undefined,
      onWeightChange: (i, v) => void this.onWeightChange(i, v),
    });
    this.root.sliders.replaceChildren(sliders);
  }

  private clearPane(): void {
    this.state = { ...this.state, selectedUser: null, hoverItem: null };
    this.view.setSelected(null);
    this.view.setHighlight(null);
    this.detail = null;
    this.root.pane.replaceChildren();
  }

  private showTooltip(node: GraphNode | null): void {
    const tip = this.root.tooltip;
    if (!node) {
      tip.hidden = true;
      return;
    }
    tip.hidden = false;
    tip.textContent = `@${node.user}  ρ=${node.rho.toFixed(3)}  (side ${node.side})`;
  }

  private showError(message: string, onRetry?: () => void): void {
    this.root.banner.replaceChildren(errorBanner(message, onRetry));
    this.root.banner.hidden = false;
  }

  private clearError(): void {
    this.root.banner.hidden = true;
    this.root.banner.replaceChildren();
  }
}

export function mount(baseUrl = ""): ExplorerApp {
  const canvas = document.getElementById("graph") as HTMLCanvasElement;
  const app = new ExplorerApp(new HttpApiClient(baseUrl), {
    canvas,
    pane: document.getElementById("pane")!,
    sliders: document.getElementById("sliders")!,
    topicSelect: document.getElementById("topic-select") as HTMLSelectElement,
    info: document.getElementById("info")!,
    tooltip: document.getElementById("tooltip")!,
    banner: document.getElementById("banner")!,
  });
  const resize = () => {
    const holder = canvas.parentElement!;
    canvas.width = holder.clientWidth;
    canvas.height = holder.clientHeight;
  };
  resize();
  window.addEventListener("resize", resize);
  void app.start();
  return app;
}
