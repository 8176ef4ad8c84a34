import type { AuthorProfile, CommunityReport, NetworkPayload, Pane } from "./types.js";

/** What the explorer is looking at. A generation counter guards every
 * selection: responses racing in for a superseded selection are
 * discarded instead of overwriting the current author's panes. */
export class ViewState {
  query = "";
  selectedAuthor: number | null = null;
  activePane: Pane = "network";
  network: NetworkPayload | null = null;
  profile: AuthorProfile | null = null;
  community: CommunityReport | null = null;

  private generation = 0;

  beginSelection(authorId: number): number {
    this.generation += 1;
    this.selectedAuthor = authorId;
    this.network = null;
    this.profile = null;
    this.community = null;
    return this.generation;
  }

  /** True when a response with this token still belongs to the current
   * selection. */
  isCurrent(token: number): boolean {
    return token === this.generation;
  }
}
