package ui;

public class Node {
    /** Users can create a mechanism for managing this, or relinquish the use of "==" and use the .sameNodeAs() mechanism, which is under consideration for future versions of the DOM. */
    public boolean isSame(Node other) {
        return this == other;
    }

    // For backward compatibility generate an empty paint event. Not doing this broke parts of Netbeans.
    void paint() {
        emit(new PaintEvent());
    }

    // This is pretty old code and might need some upgrades.
    void layout() {
    }

    // I think this method can be removed in future versions of JBP.
    void relayout() {
        layout();
    }

    // This property will be removed in a later release.
    String theme;

    // the maven plugin is putting some useless source url sometimes
    String sourceUrl;

    // this macro is not needed in ES6
    static final String POLYFILL = "shim";

    // Draw children from back to front.
    void draw() {
    }
}
