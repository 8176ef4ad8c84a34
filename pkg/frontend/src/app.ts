import { ApiClient, ApiError } from "./api.js";
import { renderCommunity, renderCorpusMissing } from "./community-view.js";
import { renderNetwork, validateNetworkPayload } from "./network-view.js";
import { renderProfile } from "./profile-view.js";
import { renderSearchResults } from "./search-view.js";
import { ViewState } from "./state.js";
import type { Pane } from "./types.js";

const PANES: Pane[] = ["network", "profile", "community"];

/** The explorer shell: a search box with a results list, pane tabs, one
 * content area, and an error banner with a retry hook. */
export class App {
  readonly state = new ViewState();
  private retryAction: (() => void) | null = null;

  private readonly searchInput: HTMLInputElement;
  private readonly resultsBox: HTMLElement;
  private readonly banner: HTMLElement;
  private readonly paneContent: HTMLElement;
  private readonly paneButtons = new Map<Pane, HTMLButtonElement>();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient = new ApiClient(),
  ) {
    root.replaceChildren();
    root.className = "citetree-app";

    const header = document.createElement("header");
    const title = document.createElement("h1");
    title.textContent = "citetree explorer";
    header.appendChild(title);

    const searchForm = document.createElement("form");
    searchForm.className = "search-form";
    this.searchInput = document.createElement("input");
    this.searchInput.type = "search";
    this.searchInput.placeholder = "author name";
    this.searchInput.setAttribute("data-role", "search-input");
    const searchButton = document.createElement("button");
    searchButton.type = "submit";
    searchButton.textContent = "search";
    searchButton.setAttribute("data-role", "search-button");
    searchForm.append(this.searchInput, searchButton);
    searchForm.addEventListener("submit", (event) => {
      event.preventDefault();
      this.runSearch(this.searchInput.value);
    });
    header.appendChild(searchForm);
    root.appendChild(header);

    this.banner = document.createElement("div");
    this.banner.className = "error-banner hidden";
    this.banner.setAttribute("data-role", "error-banner");
    root.appendChild(this.banner);

    this.resultsBox = document.createElement("div");
    this.resultsBox.setAttribute("data-role", "results");
    root.appendChild(this.resultsBox);

    const nav = document.createElement("nav");
    nav.className = "pane-nav";
    for (const pane of PANES) {
      const button = document.createElement("button");
      button.type = "button";
      button.textContent = pane;
      button.setAttribute("data-pane", pane);
      button.addEventListener("click", () => this.showPane(pane));
      this.paneButtons.set(pane, button);
      nav.appendChild(button);
    }
    root.appendChild(nav);

    this.paneContent = document.createElement("section");
    this.paneContent.setAttribute("data-role", "pane-content");
    root.appendChild(this.paneContent);
  }

  private showError(message: string, retry: (() => void) | null): void {
    this.banner.replaceChildren();
    this.banner.classList.remove("hidden");
    const text = document.createElement("span");
    text.textContent = message;
    this.banner.appendChild(text);
    this.retryAction = retry;
    if (retry) {
      const button = document.createElement("button");
      button.type = "button";
      button.textContent = "retry";
      button.setAttribute("data-role", "retry");
      button.addEventListener("click", () => {
        this.clearError();
        retry();
      });
      this.banner.appendChild(button);
    }
  }

  private clearError(): void {
    this.banner.classList.add("hidden");
    this.banner.replaceChildren();
    this.retryAction = null;
  }

  runSearch(query: string): void {
    this.state.query = query;
    this.clearError();
    this.api.searchAuthors(query).then(
      (rows) => {
        renderSearchResults(this.resultsBox, rows, (authorId) =>
          this.selectAuthor(authorId),
        );
      },
      (error) => {
        this.showError(describe(error, "search failed"), () => this.runSearch(query));
      },
    );
  }

  selectAuthor(authorId: number): void {
    const token = this.state.beginSelection(authorId);
    this.clearError();
    this.state.activePane = "network";
    this.renderActivePane();

    this.api.network(authorId).then(
      (payload) => {
        if (!this.state.isCurrent(token)) {
          return;
        }
        try {
          this.state.network = validateNetworkPayload(payload);
        } catch (error) {
          this.state.network = null;
          this.renderPaneError("network", describe(error, "bad network payload"));
          return;
        }
        this.renderIfActive("network");
      },
      (error) => {
        if (this.state.isCurrent(token)) {
          this.showError(describe(error, "network query failed"), () =>
            this.selectAuthor(authorId),
          );
        }
      },
    );
    this.api.profile(authorId).then(
      (profile) => {
        if (this.state.isCurrent(token)) {
          this.state.profile = profile;
          this.renderIfActive("profile");
        }
      },
      (error) => {
        if (this.state.isCurrent(token)) {
          this.showError(describe(error, "profile query failed"), () =>
            this.selectAuthor(authorId),
          );
        }
      },
    );
    this.api.community(authorId).then(
      (report) => {
        if (this.state.isCurrent(token)) {
          this.state.community = report;
          this.renderIfActive("community");
        }
      },
      (error) => {
        if (!this.state.isCurrent(token)) {
          return;
        }
        if (error instanceof ApiError && error.status === 503) {
          this.state.community = null;
          if (this.state.activePane === "community") {
            renderCorpusMissing(this.paneContent);
          }
          return;
        }
        this.showError(describe(error, "community query failed"), () =>
          this.selectAuthor(authorId),
        );
      },
    );
  }

  showPane(pane: Pane): void {
    this.state.activePane = pane;
    this.renderActivePane();
  }

  private renderIfActive(pane: Pane): void {
    if (this.state.activePane === pane) {
      this.renderActivePane();
    }
  }

  private renderPaneError(pane: Pane, message: string): void {
    if (this.state.activePane !== pane) {
      return;
    }
    this.paneContent.replaceChildren();
    const notice = document.createElement("p");
    notice.className = "pane-error";
    notice.textContent = message;
    this.paneContent.appendChild(notice);
  }

  private renderActivePane(): void {
    for (const [pane, button] of this.paneButtons) {
      button.classList.toggle("active", pane === this.state.activePane);
    }
    if (this.state.selectedAuthor === null) {
      this.paneContent.replaceChildren();
      const hint = document.createElement("p");
      hint.className = "pane-hint";
      hint.textContent = "search for an author to begin";
      this.paneContent.appendChild(hint);
      return;
    }
    const pane = this.state.activePane;
    if (pane === "network") {
      if (this.state.network) {
        renderNetwork(this.paneContent, this.state.network, (id) =>
          this.selectAuthor(Number(id)),
        );
      } else {
        this.renderLoading();
      }
    } else if (pane === "profile") {
      if (this.state.profile) {
        renderProfile(this.paneContent, this.state.profile);
      } else {
        this.renderLoading();
      }
    } else {
      if (this.state.community) {
        renderCommunity(this.paneContent, this.state.community, (authorId) =>
          this.selectAuthor(authorId),
        );
      } else {
        this.renderLoading();
      }
    }
  }

  private renderLoading(): void {
    this.paneContent.replaceChildren();
    const note = document.createElement("p");
    note.className = "pane-loading";
    note.textContent = "loading";
    this.paneContent.appendChild(note);
  }
}

function describe(error: unknown, fallback: string): string {
  if (error instanceof Error && error.message) {
    return `${fallback}: ${error.message}`;
  }
  return fallback;
}
